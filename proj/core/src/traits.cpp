#include "fresco/traits.hpp"

#include <algorithm>
#include <cmath>

#include "fresco/error.hpp"
#include "fresco/measure_ids.hpp"

namespace fresco {

namespace {

template <typename Map>
const MeasureValue* find_in(const Map& map, std::string_view id) {
  auto it = map.find(id);
  return it == map.end() ? nullptr : &it->second;
}

void put(MeasureMap& map, std::string_view id, MeasureValue value) { map.insert_or_assign(std::string(id), std::move(value)); }

double mean_or(const std::vector<double>& values, double fallback) {
  if (values.empty()) return fallback;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

}  // namespace

const MeasureValue* InstanceTraits::find(std::string_view measure_id) const { return find_in(values, measure_id); }
const MeasureValue* TraitVector::find(std::string_view measure_id) const { return find_in(image, measure_id); }

void ThresholdConfig::validate() const {
  double total = 0.0;
  for (double p : band_proportions) {
    if (!(p > 0.0)) throw Error(Errc::InvalidConfig, "band_proportions", "proportions must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(Errc::InvalidConfig, "band_proportions", "proportions must sum to 1");
  if (!(ellipse_factor > 0.0 && ellipse_factor <= 1.0)) {
    throw Error(Errc::InvalidConfig, "ellipse_factor", "must lie in (0, 1]");
  }
  if (!(portrait_ratio > 0.0 && portrait_ratio < 1.0)) {
    throw Error(Errc::InvalidConfig, "portrait_ratio", "must lie in (0, 1)");
  }
  if (group_breaks.size() != 5) throw Error(Errc::InvalidConfig, "group_breaks", "five boundaries required");
  for (std::size_t i = 1; i < group_breaks.size(); ++i) {
    if (group_breaks[i] <= group_breaks[i - 1]) {
      throw Error(Errc::InvalidConfig, "group_breaks", "boundaries must be strictly increasing");
    }
  }
}

std::set<std::string, std::less<>> TraitConfig::default_person_labels() {
  return {"person", "man", "woman", "boy", "girl", "child", "human"};
}

std::string to_string(PositionBand b) {
  switch (b) {
    case PositionBand::LowOrLeft: return "low_or_left";
    case PositionBand::Center: return "center";
    case PositionBand::HighOrRight: return "high_or_right";
  }
  return "center";
}

std::string vertical_label(PositionBand b) {
  switch (b) {
    case PositionBand::LowOrLeft: return "top";
    case PositionBand::Center: return "center";
    case PositionBand::HighOrRight: return "bottom";
  }
  return "center";
}

std::string horizontal_label(PositionBand b) {
  switch (b) {
    case PositionBand::LowOrLeft: return "left";
    case PositionBand::Center: return "center";
    case PositionBand::HighOrRight: return "right";
  }
  return "center";
}

std::string to_string(Centrality c) { return c == Centrality::Central ? "central" : "peripheral"; }
std::string to_string(Framing f) { return f == Framing::Portrait ? "portrait" : "scene"; }

std::string to_string(GroupSize g) {
  switch (g) {
    case GroupSize::Single: return "single";
    case GroupSize::Couple: return "couple";
    case GroupSize::SmallGroup: return "small_group";
    case GroupSize::MediumGroup: return "medium_group";
    case GroupSize::LargeGroup: return "large_group";
    case GroupSize::Crowd: return "crowd";
  }
  return "single";
}

CentroidRatios centroid_ratios(const BBox& bbox, double width, double height) {
  if (width == 0.0) throw Error(Errc::ZeroDimension, "width");
  if (height == 0.0) throw Error(Errc::ZeroDimension, "height");
  const double cx = bbox.center_x();
  const double cy = bbox.center_y();
  const double dx = (cx - width / 2.0) / (width / 2.0);
  const double dy = (cy - height / 2.0) / (height / 2.0);
  CentroidRatios out;
  out.h_ratio = std::clamp(cx / width, 0.0, 1.0);
  out.v_ratio = std::clamp(cy / height, 0.0, 1.0);
  out.centrality = std::min(std::sqrt(dx * dx + dy * dy), 1.0);
  return out;
}

PositionBand discretize_position(double ratio, const ThresholdConfig& cfg) {
  if (ratio < cfg.band_proportions[0]) return PositionBand::LowOrLeft;
  if (ratio > 1.0 - cfg.band_proportions[2]) return PositionBand::HighOrRight;
  return PositionBand::Center;
}

Centrality classify_centrality(double centrality, const ThresholdConfig& cfg) {
  return centrality <= cfg.ellipse_factor ? Centrality::Central : Centrality::Peripheral;
}

FramingResult classify_framing(const ImageRecord& record, const ThresholdConfig& cfg) {
  if (record.width <= 0) throw Error(Errc::ZeroDimension, "width");
  if (record.height <= 0) throw Error(Errc::ZeroDimension, "height");
  double largest = 0.0;
  for (const InstanceAnnotation& inst : record.instances) {
    if (inst.is_face()) largest = std::max(largest, inst.bbox.area());
  }
  FramingResult out;
  out.face_ratio = largest / (static_cast<double>(record.width) * static_cast<double>(record.height));
  out.framing = out.face_ratio > cfg.portrait_ratio ? Framing::Portrait : Framing::Scene;
  return out;
}

GroupSize discretize_group_size(int count, const ThresholdConfig& cfg) {
  static constexpr GroupSize kBuckets[] = {GroupSize::Single,      GroupSize::Couple,     GroupSize::SmallGroup,
                                           GroupSize::MediumGroup, GroupSize::LargeGroup, GroupSize::Crowd};
  for (std::size_t i = 0; i < cfg.group_breaks.size() && i < 5; ++i) {
    if (count <= cfg.group_breaks[i]) return kBuckets[i];
  }
  return GroupSize::Crowd;
}

int count_people(const ImageRecord& record, const TraitConfig& cfg) {
  int n = 0;
  for (const InstanceAnnotation& inst : record.instances) {
    if (!inst.is_face() && cfg.person_labels.contains(inst.category)) ++n;
  }
  return n;
}

TraitVector derive_traits(const ImageRecord& record, const TraitConfig& cfg) {
  namespace m = measure;
  const ThresholdConfig& th = cfg.thresholds;
  TraitVector tv;
  tv.image_id = record.image_id;
  MeasureMap& img = tv.image;

  const GlobalMeasures& g = record.global;
  put(img, m::kMedium, Categorical{to_string(record.medium)});
  put(img, m::kPalette, g.palette);
  put(img, m::kGrayscale, Categorical{g.grayscale ? "grayscale" : "color"});
  put(img, m::kHistogram, g.rgb_histograms);
  put(img, m::kBrightness, g.brightness);
  put(img, m::kSaturation, g.saturation);
  put(img, m::kBackgroundDepth, g.background_mean_depth);
  put(img, m::kCoverage, Coverage{record.coverage});

  LabelSet tags;
  for (const TagEntry& t : record.tags) tags.labels.push_back(t.label);
  std::sort(tags.labels.begin(), tags.labels.end());
  tags.labels.erase(std::unique(tags.labels.begin(), tags.labels.end()), tags.labels.end());
  put(img, m::kTags, std::move(tags));

  const int people = count_people(record, cfg);
  put(img, m::kPeopleCount, static_cast<double>(people));
  put(img, m::kGroupSize, Categorical{to_string(discretize_group_size(people, th))});

  if (record.scene) {
    put(img, m::kSceneClass, ConfidenceVector{record.scene->confidence});
    put(img, m::kIndoorOutdoor, Categorical{to_string(record.scene->indoor_outdoor)});
    put(img, m::kManmadeNatural, Categorical{to_string(record.scene->manmade_natural)});
    put(img, m::kViewerIndoorOutdoor, Categorical{to_string(record.scene->indoor_outdoor)});
  }
  if (record.caption) put(img, m::kCaption, EmbeddingVector{record.caption->embedding});

  const FramingResult framing = classify_framing(record, th);
  put(img, m::kFraming, Categorical{to_string(framing.framing)});
  put(img, m::kFaceRatio, framing.face_ratio);

  std::vector<double> object_depths;
  std::vector<double> person_depths;
  std::vector<double> face_depths;
  int objects = 0;

  const double width = record.width;
  const double height = record.height;
  for (const InstanceAnnotation& inst : record.instances) {
    InstanceTraits it;
    it.instance_id = inst.instance_id;
    it.kind = inst.kind();
    it.category = inst.category;
    if (inst.is_face()) {
      const FaceAttributes& f = inst.face();
      face_depths.push_back(inst.mean_depth);
      put(it.values, m::kAge, f.age);
      put(it.values, m::kGender, ConfidenceVector{f.gender_conf});
      put(it.values, m::kEthnicity, ConfidenceVector{f.ethnicity_conf});
      put(it.values, m::kFaceAttributes, ConfidenceVector{f.attribute_conf});
      put(it.values, m::kArousal, f.arousal);
      put(it.values, m::kEmotion, ConfidenceVector{f.emotion_conf});
      put(it.values, m::kValence, f.valence);
      put(it.values, m::kHeadYaw, f.head_pose[0]);
      put(it.values, m::kHeadPitch, f.head_pose[1]);
      put(it.values, m::kHeadRoll, f.head_pose[2]);
      put(it.values, m::kGazeYaw, f.gaze[0]);
      put(it.values, m::kGazePitch, f.gaze[1]);
    } else {
      ++objects;
      object_depths.push_back(inst.mean_depth);
      if (cfg.person_labels.contains(inst.category)) person_depths.push_back(inst.mean_depth);
      const CentroidRatios r = centroid_ratios(inst.bbox, width, height);
      put(it.values, m::kVerticalRatio, r.v_ratio);
      put(it.values, m::kVerticalBand, Categorical{vertical_label(discretize_position(r.v_ratio, th))});
      put(it.values, m::kHorizontalRatio, r.h_ratio);
      put(it.values, m::kHorizontalBand, Categorical{horizontal_label(discretize_position(r.h_ratio, th))});
      put(it.values, m::kCentrality, r.centrality);
      put(it.values, m::kCentralityClass, Categorical{to_string(classify_centrality(r.centrality, th))});
      put(it.values, m::kInstanceDepth, inst.mean_depth);
      put(it.values, m::kObjectCategory, Categorical{inst.category});
      LabelSet ocr;
      if (inst.object().ocr_text) {
        ocr.labels = *inst.object().ocr_text;
        std::sort(ocr.labels.begin(), ocr.labels.end());
        ocr.labels.erase(std::unique(ocr.labels.begin(), ocr.labels.end()), ocr.labels.end());
      }
      put(it.values, m::kOcrText, std::move(ocr));
    }
    tv.instances.push_back(std::move(it));
  }

  put(img, m::kObjectCount, static_cast<double>(objects));
  const double background = g.background_mean_depth;
  put(img, m::kSubjectDistance, mean_or(object_depths, background));
  put(img, m::kCharacterDistance,
      person_depths.empty() ? mean_or(face_depths, background) : mean_or(person_depths, background));
  return tv;
}

}  // namespace fresco
