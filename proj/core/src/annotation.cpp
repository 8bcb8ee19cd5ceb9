#include "fresco/annotation.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

namespace fresco {

namespace {

constexpr double kHistogramTolerance = 1e-9;
constexpr double kPaletteTolerance = 1e-9;
constexpr double kMulticlassTolerance = 1e-6;
constexpr double kCoverageTolerance = 1e-6;

class ViolationSink {
 public:
  ViolationSink(const std::string& image_id, std::vector<Violation>& out) : image_id_(image_id), out_(out) {}

  void add(ViolationKind kind, std::string field, std::string message) {
    out_.push_back({kind, image_id_, std::move(field), std::move(message)});
  }
  void range(const std::string& field, double value, double lo, double hi) {
    if (!(value >= lo && value <= hi)) {
      add(ViolationKind::RangeViolation, field,
          "value " + std::to_string(value) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }

 private:
  const std::string& image_id_;
  std::vector<Violation>& out_;
};

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

bool all_non_negative(const std::vector<double>& v) {
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) return false;
  }
  return true;
}

void check_confidence(ViolationSink& sink, const std::string& field, const std::vector<double>& v,
                      const std::vector<std::string>& labels, bool multiclass) {
  if (!all_non_negative(v)) {
    sink.add(ViolationKind::InvariantViolation, field, "confidence entries must be finite and >= 0");
  }
  if (multiclass && std::abs(sum(v) - 1.0) > kMulticlassTolerance) {
    sink.add(ViolationKind::InvariantViolation, field, "multiclass confidences must sum to 1");
  }
  if (!labels.empty() && v.size() != labels.size()) {
    sink.add(ViolationKind::DimensionMismatch, field,
             "expected " + std::to_string(labels.size()) + " entries, got " + std::to_string(v.size()));
  }
}

void check_instance(ViolationSink& sink, const ImageRecord& rec, const InstanceAnnotation& inst,
                    const SchemaConfig& schema) {
  const std::string prefix = "instances[" + inst.instance_id + "].";
  const BBox& b = inst.bbox;
  if (!(b.w > 0.0) || !(b.h > 0.0)) {
    sink.add(ViolationKind::InvariantViolation, prefix + "bbox", "bbox width and height must be > 0");
  }
  if (b.x < 0.0 || b.y < 0.0 || b.x + b.w > rec.width || b.y + b.h > rec.height) {
    sink.add(ViolationKind::RangeViolation, prefix + "bbox", "bbox exceeds image bounds");
  }
  sink.range(prefix + "mean_depth", inst.mean_depth, 0.0, 1.0);

  if (inst.is_face()) {
    const FaceAttributes& f = inst.face();
    if (inst.category != "face") {
      sink.add(ViolationKind::InvariantViolation, prefix + "category", "face instances use category \"face\"");
    }
    sink.range(prefix + "age", f.age, 0.0, 150.0);
    check_confidence(sink, prefix + "gender_conf", f.gender_conf, schema.labels.gender, false);
    check_confidence(sink, prefix + "ethnicity_conf", f.ethnicity_conf, schema.labels.ethnicity, true);
    check_confidence(sink, prefix + "emotion_conf", f.emotion_conf, schema.labels.emotion, true);
    check_confidence(sink, prefix + "attribute_conf", f.attribute_conf, schema.labels.attributes, false);
    sink.range(prefix + "valence", f.valence, -1.0, 1.0);
    sink.range(prefix + "arousal", f.arousal, -1.0, 1.0);
    sink.range(prefix + "head_pose.yaw", f.head_pose[0], -180.0, 180.0);
    sink.range(prefix + "head_pose.pitch", f.head_pose[1], -180.0, 180.0);
    sink.range(prefix + "head_pose.roll", f.head_pose[2], -180.0, 180.0);
    sink.range(prefix + "gaze.yaw", f.gaze[0], -180.0, 180.0);
    sink.range(prefix + "gaze.pitch", f.gaze[1], -180.0, 180.0);
  } else {
    if (inst.category.empty()) {
      sink.add(ViolationKind::InvariantViolation, prefix + "category", "object category must be non-empty");
    }
    sink.range(prefix + "detector_conf", inst.object().detector_conf, 0.0, 1.0);
  }
}

}  // namespace

const LabelSpaces& LabelSpaces::defaults() {
  static const LabelSpaces spaces{
      {"female", "male"},
      {"white", "black", "asian", "indian", "latino_hispanic", "middle_eastern"},
      {"neutral", "happy", "sad", "surprise", "fear", "disgust", "anger", "contempt"},
      {"5_o_clock_shadow", "arched_eyebrows", "attractive", "bags_under_eyes", "bald", "bangs", "big_lips",
       "big_nose", "black_hair", "blond_hair", "blurry", "brown_hair", "bushy_eyebrows", "chubby", "double_chin",
       "eyeglasses", "goatee", "gray_hair", "heavy_makeup", "high_cheekbones", "male", "mouth_slightly_open",
       "mustache", "narrow_eyes", "no_beard", "oval_face", "pale_skin", "pointy_nose", "receding_hairline",
       "rosy_cheeks", "sideburns", "smiling", "straight_hair", "wavy_hair", "wearing_earrings", "wearing_hat",
       "wearing_lipstick", "wearing_necklace", "wearing_necktie", "young"},
  };
  return spaces;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateId: return "DuplicateId";
    case ViolationKind::RangeViolation: return "RangeViolation";
    case ViolationKind::InvariantViolation: return "InvariantViolation";
    case ViolationKind::MixedHistogramBins: return "MixedHistogramBins";
    case ViolationKind::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

std::string to_string(Medium m) {
  switch (m) {
    case Medium::Photograph: return "photograph";
    case Medium::Illustration: return "illustration";
    case Medium::Map: return "map";
    case Medium::Other: return "other";
  }
  return "other";
}

std::string to_string(IndoorOutdoor v) { return v == IndoorOutdoor::Indoor ? "indoor" : "outdoor"; }
std::string to_string(ManmadeNatural v) { return v == ManmadeNatural::Manmade ? "manmade" : "natural"; }

std::optional<Medium> medium_from_string(std::string_view s) {
  if (s == "photograph") return Medium::Photograph;
  if (s == "illustration") return Medium::Illustration;
  if (s == "map") return Medium::Map;
  if (s == "other") return Medium::Other;
  return std::nullopt;
}

std::optional<IndoorOutdoor> indoor_outdoor_from_string(std::string_view s) {
  if (s == "indoor") return IndoorOutdoor::Indoor;
  if (s == "outdoor") return IndoorOutdoor::Outdoor;
  return std::nullopt;
}

std::optional<ManmadeNatural> manmade_natural_from_string(std::string_view s) {
  if (s == "manmade") return ManmadeNatural::Manmade;
  if (s == "natural") return ManmadeNatural::Natural;
  return std::nullopt;
}

std::vector<Violation> check_record(const ImageRecord& rec, const SchemaConfig& schema) {
  std::vector<Violation> out;
  ViolationSink sink(rec.image_id, out);

  if (rec.image_id.empty()) sink.add(ViolationKind::InvariantViolation, "image_id", "image_id must be non-empty");
  if (rec.width <= 0) sink.add(ViolationKind::InvariantViolation, "width", "width must be > 0");
  if (rec.height <= 0) sink.add(ViolationKind::InvariantViolation, "height", "height must be > 0");

  const GlobalMeasures& g = rec.global;
  sink.range("brightness", g.brightness, 0.0, 1.0);
  sink.range("saturation", g.saturation, 0.0, 1.0);
  sink.range("background_mean_depth", g.background_mean_depth, 0.0, 1.0);

  if (g.palette.empty()) {
    sink.add(ViolationKind::InvariantViolation, "palette", "palette must be non-empty");
  } else {
    double total = 0.0;
    bool bad_entry = false;
    for (const PaletteEntry& e : g.palette) {
      total += e.weight;
      if (!(e.weight >= 0.0 && e.weight <= 1.0)) bad_entry = true;
      for (double c : e.rgb) {
        if (!(c >= 0.0 && c <= 255.0)) sink.add(ViolationKind::RangeViolation, "palette", "rgb component outside [0,255]");
      }
    }
    if (bad_entry || std::abs(total - 1.0) > kPaletteTolerance) {
      sink.add(ViolationKind::InvariantViolation, "palette", "palette weights must lie in [0,1] and sum to 1");
    }
  }

  const auto& ch = g.rgb_histograms.channels;
  if (ch[0].empty() || ch[0].size() != ch[1].size() || ch[0].size() != ch[2].size()) {
    sink.add(ViolationKind::InvariantViolation, "rgb_histograms", "three non-empty channels with equal bin count required");
  } else {
    for (const auto& h : ch) {
      if (!all_non_negative(h) || std::abs(sum(h) - 1.0) > kHistogramTolerance) {
        sink.add(ViolationKind::InvariantViolation, "rgb_histograms", "each channel must be non-negative and sum to 1");
        break;
      }
    }
    if (schema.histogram_bins && ch[0].size() != *schema.histogram_bins) {
      sink.add(ViolationKind::MixedHistogramBins, "rgb_histograms",
               "expected " + std::to_string(*schema.histogram_bins) + " bins per channel");
    }
  }

  double coverage_total = 0.0;
  for (const auto& [label, frac] : rec.coverage) {
    sink.range("coverage." + label, frac, 0.0, 1.0);
    coverage_total += frac;
  }
  if (coverage_total > 1.0 + kCoverageTolerance) {
    sink.add(ViolationKind::InvariantViolation, "coverage", "coverage fractions sum above 1");
  }

  std::set<std::string> tag_labels;
  for (const TagEntry& t : rec.tags) {
    if (!tag_labels.insert(t.label).second) {
      sink.add(ViolationKind::InvariantViolation, "tags", "duplicate tag label \"" + t.label + "\"");
    }
    sink.range("tags." + t.label, t.confidence, 0.0, 1.0);
  }

  if (rec.scene && !all_non_negative(rec.scene->confidence)) {
    sink.add(ViolationKind::InvariantViolation, "scene.confidence", "confidence entries must be finite and >= 0");
  }

  std::set<std::string> instance_ids;
  for (const InstanceAnnotation& inst : rec.instances) {
    if (!instance_ids.insert(inst.instance_id).second) {
      sink.add(ViolationKind::InvariantViolation, "instances", "duplicate instance_id \"" + inst.instance_id + "\"");
    }
    check_instance(sink, rec, inst, schema);
  }
  return out;
}

std::vector<Violation> validate_archive(std::span<const ImageRecord> records, const SchemaConfig& schema) {
  std::vector<Violation> out;
  if (records.empty()) return out;

  SchemaConfig effective = schema;
  if (!effective.histogram_bins && !records.front().global.rgb_histograms.channels[0].empty()) {
    effective.histogram_bins = records.front().global.rgb_histograms.bins();
  }

  std::unordered_map<std::string, std::size_t> seen;
  std::optional<std::size_t> scene_dim;
  std::optional<std::size_t> caption_dim;
  for (const ImageRecord& rec : records) {
    auto per_record = check_record(rec, effective);
    out.insert(out.end(), per_record.begin(), per_record.end());

    if (!seen.emplace(rec.image_id, 1).second) {
      out.push_back({ViolationKind::DuplicateId, rec.image_id, "image_id", "duplicate image_id"});
    }
    if (rec.scene) {
      if (!scene_dim) scene_dim = rec.scene->confidence.size();
      if (rec.scene->confidence.size() != *scene_dim) {
        out.push_back({ViolationKind::DimensionMismatch, rec.image_id, "scene.confidence",
                       "scene vector dimension differs across the archive"});
      }
    }
    if (rec.caption) {
      if (!caption_dim) caption_dim = rec.caption->embedding.size();
      if (rec.caption->embedding.size() != *caption_dim) {
        out.push_back({ViolationKind::DimensionMismatch, rec.image_id, "caption.embedding",
                       "caption embedding dimension differs across the archive"});
      }
    }
  }
  return out;
}

}  // namespace fresco
