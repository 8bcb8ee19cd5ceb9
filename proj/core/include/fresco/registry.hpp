#pragma once

// Measure registry: which traits enter the score, at which level and group,
// compared with which metric, under which range and weight. The group
// structure of the score tree is defined here, not in code.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fresco/annotation.hpp"

namespace fresco {

enum class Level { Plastic, Figurative, Enunciational };
enum class Scope { Image, Instance };
enum class MetricKind { AbsError, Hellinger, PaletteCielab, Jaccard, ContinuousJaccard, Cosine, Binary, CountRatio };

inline constexpr Level kLevels[] = {Level::Plastic, Level::Figurative, Level::Enunciational};

std::string to_string(Level l);
std::string to_string(Scope s);
std::string to_string(MetricKind m);
std::optional<Level> level_from_string(std::string_view s);

struct MeasureDescriptor {
  std::string id;
  std::string name;
  Level level = Level::Plastic;
  std::string group;
  Scope scope = Scope::Image;
  InstanceKind applies_to = InstanceKind::Object;  // meaningful for instance scope only
  MetricKind metric = MetricKind::AbsError;
  std::optional<std::pair<double, double>> range;  // required for abs_error
  double weight = 1.0;
  std::vector<std::string> labels;  // class names of confidence vectors, when declared

  bool operator==(const MeasureDescriptor&) const = default;
};

/// Value shape a trait id carries in a TraitVector.
enum class ValueShape { Scalar, Categorical, LabelSet, Confidence, Embedding, Palette, Histograms, Coverage };

struct TraitInfo {
  std::string_view id;
  Scope scope;
  InstanceKind applies_to;
  ValueShape shape;
};

/// Every trait derive_traits can produce.
const std::vector<TraitInfo>& trait_catalog();
const TraitInfo* find_trait(std::string_view id);

class MeasureRegistry {
 public:
  MeasureRegistry() = default;
  /// Throws RegistryMismatch on duplicate or unknown ids, a metric that does
  /// not fit the trait's value shape, or a scalar metric without a range.
  explicit MeasureRegistry(std::vector<MeasureDescriptor> measures);

  static const MeasureRegistry& defaults();
  static MeasureRegistry from_json(const nlohmann::json& j);
  static MeasureRegistry load_file(const std::string& path);
  nlohmann::ordered_json to_json() const;

  const std::vector<MeasureDescriptor>& measures() const noexcept { return measures_; }
  const MeasureDescriptor* find(std::string_view id) const;
  /// Throws UnknownMeasure.
  const MeasureDescriptor& at(std::string_view id) const;

  /// Groups of a level in first-appearance order.
  std::vector<std::string> groups(Level level) const;
  /// Descriptors of one group in registry order.
  std::vector<const MeasureDescriptor*> group_measures(Level level, std::string_view group) const;

  bool operator==(const MeasureRegistry& other) const { return measures_ == other.measures_; }

 private:
  std::vector<MeasureDescriptor> measures_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace fresco
