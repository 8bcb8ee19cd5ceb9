#pragma once

// Annotation record model: one ImageRecord per image, as produced by the
// upstream extraction stage (detectors, classifiers, depth and segmentation
// models) and consumed by trait derivation and scoring.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace fresco {

enum class Medium { Photograph, Illustration, Map, Other };
enum class InstanceKind { Face, Object };
enum class IndoorOutdoor { Indoor, Outdoor };
enum class ManmadeNatural { Manmade, Natural };

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double center_x() const noexcept { return x + w / 2.0; }
  double center_y() const noexcept { return y + h / 2.0; }
  double area() const noexcept { return w * h; }

  bool operator==(const BBox&) const = default;
};

struct PaletteEntry {
  std::array<double, 3> rgb{};  // sRGB components in [0,255]
  double weight = 0.0;

  bool operator==(const PaletteEntry&) const = default;
};
using Palette = std::vector<PaletteEntry>;

/// Per-channel normalized histograms (R, G, B) with a common bin count.
struct RgbHistograms {
  std::array<std::vector<double>, 3> channels;

  std::size_t bins() const noexcept { return channels[0].size(); }
  bool operator==(const RgbHistograms&) const = default;
};

struct GlobalMeasures {
  double brightness = 0.0;
  double saturation = 0.0;
  bool grayscale = false;
  Palette palette;
  RgbHistograms rgb_histograms;
  double background_mean_depth = 0.0;
  std::optional<std::string> line_map_path;  // stored, never scored

  bool operator==(const GlobalMeasures&) const = default;
};

struct FaceAttributes {
  double age = 0.0;
  std::vector<double> gender_conf;
  std::vector<double> ethnicity_conf;
  std::vector<double> emotion_conf;
  std::vector<double> attribute_conf;
  double valence = 0.0;
  double arousal = 0.0;
  std::array<double, 3> head_pose{};  // yaw, pitch, roll (degrees)
  std::array<double, 2> gaze{};       // yaw, pitch (degrees)

  bool operator==(const FaceAttributes&) const = default;
};

struct ObjectAttributes {
  double detector_conf = 0.0;
  std::optional<std::vector<std::string>> ocr_text;

  bool operator==(const ObjectAttributes&) const = default;
};

struct InstanceAnnotation {
  std::string instance_id;
  std::string category;  // "face" for faces, detector label for objects
  BBox bbox;
  double mean_depth = 0.0;
  std::variant<FaceAttributes, ObjectAttributes> attributes;
  nlohmann::json extras = nlohmann::json::object();

  InstanceKind kind() const noexcept {
    return attributes.index() == 0 ? InstanceKind::Face : InstanceKind::Object;
  }
  bool is_face() const noexcept { return kind() == InstanceKind::Face; }
  const FaceAttributes& face() const { return std::get<FaceAttributes>(attributes); }
  const ObjectAttributes& object() const { return std::get<ObjectAttributes>(attributes); }

  bool operator==(const InstanceAnnotation&) const = default;
};

struct TagEntry {
  std::string label;
  double confidence = 1.0;

  bool operator==(const TagEntry&) const = default;
};

struct CaptionEntry {
  std::string text;
  std::vector<double> embedding;

  bool operator==(const CaptionEntry&) const = default;
};

struct SceneEntry {
  std::vector<double> confidence;
  IndoorOutdoor indoor_outdoor = IndoorOutdoor::Outdoor;
  ManmadeNatural manmade_natural = ManmadeNatural::Natural;

  bool operator==(const SceneEntry&) const = default;
};

/// One panoptic segment; only "thing" segments are counted or compared as topics.
struct PanopticSegment {
  std::string label;
  bool thing = true;

  bool operator==(const PanopticSegment&) const = default;
};

struct ImageRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  Medium medium = Medium::Photograph;
  GlobalMeasures global;
  std::vector<InstanceAnnotation> instances;
  std::map<std::string, double> coverage;
  std::vector<TagEntry> tags;
  std::optional<CaptionEntry> caption;
  std::optional<SceneEntry> scene;
  std::vector<PanopticSegment> panoptic;
  std::optional<std::string> thumbnail;
  nlohmann::json extras = nlohmann::json::object();

  bool operator==(const ImageRecord&) const = default;
};

/// Declared label lists for the per-face confidence vectors.
struct LabelSpaces {
  std::vector<std::string> gender;
  std::vector<std::string> ethnicity;
  std::vector<std::string> emotion;
  std::vector<std::string> attributes;

  static const LabelSpaces& defaults();
};

struct SchemaConfig {
  /// Expected bins per channel. Unset: inferred from the first record.
  std::optional<std::size_t> histogram_bins;
  LabelSpaces labels = LabelSpaces::defaults();
};

enum class ViolationKind { DuplicateId, RangeViolation, InvariantViolation, MixedHistogramBins, DimensionMismatch };

struct Violation {
  ViolationKind kind;
  std::string image_id;
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::string to_string(ViolationKind kind);
std::string to_string(Medium m);
std::string to_string(IndoorOutdoor v);
std::string to_string(ManmadeNatural v);
std::optional<Medium> medium_from_string(std::string_view s);
std::optional<IndoorOutdoor> indoor_outdoor_from_string(std::string_view s);
std::optional<ManmadeNatural> manmade_natural_from_string(std::string_view s);

/// Every invariant and range violation of a single record, in field order.
std::vector<Violation> check_record(const ImageRecord& record, const SchemaConfig& schema = {});

/// Violations across an archive: per-record checks plus duplicate ids, mixed
/// histogram bin counts and inconsistent vector dimensions. Empty means the
/// archive is ready for scoring.
std::vector<Violation> validate_archive(std::span<const ImageRecord> records, const SchemaConfig& schema = {});

}  // namespace fresco
