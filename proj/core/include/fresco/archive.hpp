#pragma once

// Immutable in-memory archive: records plus their TraitVectors, derived once
// under a snapshot of the trait and registry configuration. Ranking is
// exhaustive (the score is not a metric, so there is no index to prune with)
// and parallel across candidates with a deterministic merge.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "fresco/annotation.hpp"
#include "fresco/registry.hpp"
#include "fresco/scoring.hpp"
#include "fresco/traits.hpp"

namespace fresco {

struct ArchiveConfig {
  TraitConfig traits;
  SchemaConfig schema;
  MeasureRegistry registry = MeasureRegistry::defaults();
  /// Instances per kind flattened into the CSV export.
  std::size_t export_max_instances = 8;
  /// Worker threads for derivation and ranking; 0 means hardware concurrency.
  std::size_t threads = 0;
};

struct BuildStats {
  std::size_t images = 0;
  std::size_t faces = 0;
  std::size_t objects = 0;
  double derive_seconds = 0.0;
};

class Archive {
 public:
  Archive() = default;

  /// Validates every record, then derives traits. Throws DuplicateId, or
  /// SchemaViolation / InvariantViolation naming the image.
  static Archive build(std::vector<ImageRecord> records, ArchiveConfig cfg = {});

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const std::vector<ImageRecord>& records() const noexcept { return records_; }
  const ImageRecord& record(std::size_t i) const { return records_.at(i); }
  const TraitVector& traits(std::size_t i) const { return traits_.at(i); }
  std::optional<std::size_t> index_of(std::string_view image_id) const;
  /// Throws UnknownImage.
  std::size_t require(std::string_view image_id) const;

  const ArchiveConfig& config() const noexcept { return cfg_; }
  const MeasureRegistry& registry() const noexcept { return cfg_.registry; }
  const BuildStats& stats() const noexcept { return stats_; }
  std::size_t workers(std::size_t items) const;

 private:
  std::vector<ImageRecord> records_;
  std::vector<TraitVector> traits_;
  std::unordered_map<std::string, std::size_t> index_;
  ArchiveConfig cfg_;
  BuildStats stats_;
};

enum class Window { Top, Median, Last };
std::string to_string(Window w);
std::optional<Window> window_from_string(std::string_view s);

/// Candidate filter; returning false drops the candidate before scoring.
using Prefilter = std::function<bool(const Archive&, std::size_t reference, std::size_t candidate)>;

struct RankOptions {
  std::size_t k = 8;
  Window window = Window::Top;
  bool with_breakdown = false;
  Prefilter prefilter;  // off by default
};

struct RankedEntry {
  std::string image_id;
  double similarity = 0.0;
  std::size_t position = 0;  // 0-based rank in the full ordering
  std::optional<ScoreBreakdown> breakdown;
};

struct RankedList {
  std::string reference_id;
  std::optional<WeightConfig> weights;
  std::optional<std::string> measure_id;
  bool include_unpaired = true;
  std::size_t k = 0;
  Window window = Window::Top;
  std::size_t candidates = 0;  // scored candidates, reference excluded
  std::vector<RankedEntry> entries;  // descending similarity, ties by image_id
};

/// Scores the reference against every other image with the overall score
/// and returns a k-window of the ordering. Median starts at (n - k) / 2.
/// Throws UnknownImage, or InvalidConfig when k is 0.
RankedList rank(const Archive& archive, std::string_view reference_id, const WeightConfig& w,
                const RankOptions& opts = {});

/// Same, ordered by a single measure's compound similarity.
/// Throws UnknownMeasure and UnknownImage.
RankedList rank_by_measure(const Archive& archive, std::string_view reference_id, std::string_view measure_id,
                           const RankOptions& opts = {}, bool include_unpaired = true);

nlohmann::ordered_json ranked_to_json(const RankedList& list);
/// One `image_id<TAB>similarity` line per entry.
std::string ranked_to_text(const RankedList& list);

struct Distribution {
  enum class Kind { Histogram, Tally };

  std::string measure_id;
  Kind kind = Kind::Histogram;
  std::size_t samples = 0;
  std::vector<double> edges;          // histogram: bins + 1 ascending edges
  std::vector<std::string> labels;    // bin label or category
  std::vector<std::size_t> counts;
  std::vector<double> fractions;      // all zero when there are no samples
};

/// Scalars give a histogram over the registered range (or the data range when
/// unregistered), with the maximum falling in the last bin. Categorical values
/// give a tally; confidence vectors are tallied by their argmax class; label
/// sets tally every label. Instance measures pool all instances.
/// Throws UnknownMeasure, and InvalidConfig when bins is 0 or the value shape
/// has no distribution.
Distribution distribution(const Archive& archive, std::string_view measure_id, std::size_t bins = 10);

std::string distribution_to_csv(const Distribution& d);
/// Plot-ready `x<TAB>fraction` lines; x is the bin centre or the category.
std::string distribution_to_plot(const Distribution& d);
nlohmann::ordered_json distribution_to_json(const Distribution& d);

/// Writes one row per image and returns the row count. Image-level traits
/// come first, then per-instance traits flattened as face_<k>_<id> and
/// object_<k>_<id> for k below the configured cap. A column dictionary is
/// written to `<path>.columns.csv`. Throws IoFailure.
std::size_t export_table(const Archive& archive, const std::string& path);
std::size_t export_table(const Archive& archive, std::ostream& table, std::ostream& columns);

/// Stable JSON rendering of a TraitVector; numbers rounded to 10 decimals.
nlohmann::ordered_json traits_to_json(const TraitVector& traits);

}  // namespace fresco
