#pragma once

// Hierarchical image similarity. Per-measure similarities (leaves) are
// averaged into groups, groups into the plastic / figurative / enunciational
// level scores, and the levels into the overall score with weights
// (alpha, beta, gamma) normalized to sum 1. Every internal node is the
// weighted arithmetic mean of its children.
//
// Instance-scope measures are evaluated over the matched pairs of the
// instance kind they apply to. Every unmatched instance of that kind adds a
// slot with similarity 0, so the compound value is the mean over
// max(M, N) slots per pool. When neither image has such instances the
// measure is 1.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fresco/annotation.hpp"
#include "fresco/matching.hpp"
#include "fresco/registry.hpp"
#include "fresco/traits.hpp"

namespace fresco {

struct WeightConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  /// Overrides keyed by tree path ("plastic/chromatic", "figurative/people/2.2.2.2").
  std::map<std::string, double> node_weights;

  /// Throws InvalidConfig on negative weights or alpha = beta = gamma = 0.
  void validate() const;
  double level_weight(Level level) const;
  static WeightConfig only(Level level);
};

struct ScoreNode {
  std::string path;
  std::string name;
  double similarity = 1.0;
  double weight = 1.0;
  std::vector<ScoreNode> children;
};

struct ScoreBreakdown {
  std::string image_a;
  std::string image_b;
  WeightConfig weights;
  ScoreNode root;
  MatchResult match;

  double overall() const noexcept { return root.similarity; }
  const ScoreNode* find(std::string_view path) const;
};

/// Similarity of two values of one measure. Throws RegistryMismatch when a
/// value does not have the shape the metric expects.
double measure_similarity(const MeasureDescriptor& d, const MeasureValue& a, const MeasureValue& b);

ScoreBreakdown fresco_score(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
                            const WeightConfig& w = {}, const MeasureRegistry& registry = MeasureRegistry::defaults());

/// Overall score only; identical arithmetic to fresco_score without building the tree.
double fresco_overall(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
                      const WeightConfig& w = {}, const MeasureRegistry& registry = MeasureRegistry::defaults());

/// Level subtree value of fresco_score under the given match.
double level_score(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
                   Level level, const MatchResult& match, const WeightConfig& w = {},
                   const MeasureRegistry& registry = MeasureRegistry::defaults());

struct MeasureScoreOptions {
  /// When false, only matched pairs enter an instance measure; with no pairs
  /// the value is 1 if neither image has instances of the kind, else 0.
  bool include_unpaired = true;
};

/// Compound similarity of a single registered measure. Throws UnknownMeasure.
double measure_score(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
                     std::string_view measure_id, const MatchResult& match, MeasureScoreOptions opts = {},
                     const MeasureRegistry& registry = MeasureRegistry::defaults());

/// Stable-field-order export; numbers rounded to 10 decimals.
nlohmann::ordered_json breakdown_to_json(const ScoreBreakdown& breakdown);
nlohmann::ordered_json match_to_json(const MatchResult& match);

/// Indented human-readable tree.
std::string breakdown_to_text(const ScoreBreakdown& breakdown, int max_depth = -1);

}  // namespace fresco
