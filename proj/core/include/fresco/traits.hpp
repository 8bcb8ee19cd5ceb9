#pragma once

// Trait derivation: turns an ImageRecord into its TraitVector (the per-image
// "identikit"), applying positional, framing and group-size thresholds.

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fresco/annotation.hpp"

namespace fresco {

struct Categorical {
  std::string value;
  bool operator==(const Categorical&) const = default;
};

/// Sorted, duplicate-free labels.
struct LabelSet {
  std::vector<std::string> labels;
  bool operator==(const LabelSet&) const = default;
};

/// Non-negative model confidences; compared without remapping.
struct ConfidenceVector {
  std::vector<double> values;
  bool operator==(const ConfidenceVector&) const = default;
};

/// Signed embedding; cosine is remapped to [0,1].
struct EmbeddingVector {
  std::vector<double> values;
  bool operator==(const EmbeddingVector&) const = default;
};

struct Coverage {
  std::map<std::string, double> fractions;
  bool operator==(const Coverage&) const = default;
};

using MeasureValue =
    std::variant<double, Categorical, LabelSet, ConfidenceVector, EmbeddingVector, Palette, RgbHistograms, Coverage>;
using MeasureMap = std::map<std::string, MeasureValue, std::less<>>;

struct InstanceTraits {
  std::string instance_id;
  InstanceKind kind = InstanceKind::Object;
  std::string category;
  MeasureMap values;

  const MeasureValue* find(std::string_view measure_id) const;
  bool operator==(const InstanceTraits&) const = default;
};

struct TraitVector {
  std::string image_id;
  MeasureMap image;
  std::vector<InstanceTraits> instances;  // aligned with ImageRecord::instances

  const MeasureValue* find(std::string_view measure_id) const;
  bool operator==(const TraitVector&) const = default;
};

struct ThresholdConfig {
  std::array<double, 3> band_proportions{0.4, 0.2, 0.4};
  double ellipse_factor = 0.6;
  double portrait_ratio = 0.3;
  std::vector<int> group_breaks{1, 2, 6, 12, 30};

  /// Throws InvalidConfig when an invariant does not hold.
  void validate() const;
};

struct TraitConfig {
  ThresholdConfig thresholds;
  /// Object-detector labels counted as people (the "person" synset).
  std::set<std::string, std::less<>> person_labels = default_person_labels();

  static std::set<std::string, std::less<>> default_person_labels();
};

struct CentroidRatios {
  double h_ratio = 0.0;
  double v_ratio = 0.0;
  double centrality = 0.0;  // 0 at the centre, 1 on (or beyond) the inscribed ellipse
};

enum class PositionBand { LowOrLeft, Center, HighOrRight };
enum class Centrality { Central, Peripheral };
enum class Framing { Portrait, Scene };
enum class GroupSize { Single, Couple, SmallGroup, MediumGroup, LargeGroup, Crowd };

std::string to_string(PositionBand b);
std::string to_string(Centrality c);
std::string to_string(Framing f);
std::string to_string(GroupSize g);
std::string vertical_label(PositionBand b);    // top / center / bottom
std::string horizontal_label(PositionBand b);  // left / center / right

/// Throws ZeroDimension when width or height is zero.
CentroidRatios centroid_ratios(const BBox& bbox, double width, double height);

/// First band below proportions[0], third above 1 - proportions[2]; both
/// boundaries belong to the centre band.
PositionBand discretize_position(double ratio, const ThresholdConfig& cfg = {});

/// Central iff the centroid lies in the ellipse scaled by ellipse_factor
/// (boundary inclusive).
Centrality classify_centrality(double centrality, const ThresholdConfig& cfg = {});

struct FramingResult {
  Framing framing = Framing::Scene;
  double face_ratio = 0.0;  // largest face area / image area
};

/// Portrait iff the largest face covers strictly more than portrait_ratio.
FramingResult classify_framing(const ImageRecord& record, const ThresholdConfig& cfg = {});

GroupSize discretize_group_size(int count, const ThresholdConfig& cfg = {});

/// Number of object instances whose category is in the person synset.
int count_people(const ImageRecord& record, const TraitConfig& cfg = {});

TraitVector derive_traits(const ImageRecord& record, const TraitConfig& cfg = {});

}  // namespace fresco
