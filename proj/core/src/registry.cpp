#include "fresco/registry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fresco/error.hpp"
#include "fresco/measure_ids.hpp"

namespace fresco {

namespace {

namespace m = measure;
using json = nlohmann::json;

constexpr InstanceKind kObj = InstanceKind::Object;
constexpr InstanceKind kFace = InstanceKind::Face;

bool metric_fits(MetricKind metric, ValueShape shape) {
  switch (metric) {
    case MetricKind::AbsError:
    case MetricKind::CountRatio: return shape == ValueShape::Scalar;
    case MetricKind::Hellinger: return shape == ValueShape::Histograms;
    case MetricKind::PaletteCielab: return shape == ValueShape::Palette;
    case MetricKind::Jaccard: return shape == ValueShape::LabelSet;
    case MetricKind::ContinuousJaccard: return shape == ValueShape::Coverage;
    case MetricKind::Cosine: return shape == ValueShape::Confidence || shape == ValueShape::Embedding;
    case MetricKind::Binary: return shape == ValueShape::Categorical || shape == ValueShape::Scalar;
  }
  return false;
}

std::optional<MetricKind> metric_from_string(std::string_view s) {
  static constexpr MetricKind all[] = {MetricKind::AbsError,          MetricKind::Hellinger, MetricKind::PaletteCielab,
                                       MetricKind::Jaccard,           MetricKind::ContinuousJaccard,
                                       MetricKind::Cosine,            MetricKind::Binary,    MetricKind::CountRatio};
  for (MetricKind k : all) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

MeasureDescriptor image(std::string_view id, std::string name, Level level, std::string group, MetricKind metric,
                        std::optional<std::pair<double, double>> range = std::nullopt, double weight = 1.0) {
  MeasureDescriptor d;
  d.id = std::string(id);
  d.name = std::move(name);
  d.level = level;
  d.group = std::move(group);
  d.scope = Scope::Image;
  d.metric = metric;
  d.range = range;
  d.weight = weight;
  return d;
}

MeasureDescriptor inst(std::string_view id, std::string name, Level level, std::string group, InstanceKind kind,
                       MetricKind metric, std::optional<std::pair<double, double>> range = std::nullopt,
                       double weight = 1.0) {
  MeasureDescriptor d = image(id, std::move(name), level, std::move(group), metric, range, weight);
  d.scope = Scope::Instance;
  d.applies_to = kind;
  return d;
}

std::vector<MeasureDescriptor> default_measures() {
  using L = Level;
  using K = MetricKind;
  const std::pair<double, double> unit{0.0, 1.0};
  const std::pair<double, double> signed_unit{-1.0, 1.0};
  const std::pair<double, double> angle{-90.0, 90.0};
  const LabelSpaces& labels = LabelSpaces::defaults();

  std::vector<MeasureDescriptor> v;
  v.push_back(image(m::kPalette, "palette", L::Plastic, "chromatic", K::PaletteCielab));
  v.push_back(image(m::kGrayscale, "grayscale", L::Plastic, "chromatic", K::Binary));
  v.push_back(image(m::kHistogram, "color distribution", L::Plastic, "chromatic", K::Hellinger));
  v.push_back(image(m::kBrightness, "brightness", L::Plastic, "chromatic", K::AbsError, unit));
  v.push_back(image(m::kSaturation, "saturation", L::Plastic, "chromatic", K::AbsError, unit));

  v.push_back(inst(m::kVerticalRatio, "vertical position ratio", L::Plastic, "topological", kObj, K::AbsError, unit));
  v.push_back(inst(m::kHorizontalRatio, "horizontal position ratio", L::Plastic, "topological", kObj, K::AbsError, unit));
  v.push_back(inst(m::kCentrality, "centrality ratio", L::Plastic, "topological", kObj, K::AbsError, unit));
  v.push_back(inst(m::kInstanceDepth, "instance mean depth", L::Plastic, "topological", kObj, K::AbsError, unit));
  v.push_back(image(m::kBackgroundDepth, "background mean depth", L::Plastic, "topological", K::AbsError, unit));
  v.push_back(image(m::kCoverage, "spatial coverage", L::Plastic, "topological", K::ContinuousJaccard));
  v.push_back(inst(m::kVerticalBand, "top/center/bottom band", L::Plastic, "topological", kObj, K::Binary,
                   std::nullopt, 0.0));
  v.push_back(inst(m::kHorizontalBand, "left/center/right band", L::Plastic, "topological", kObj, K::Binary,
                   std::nullopt, 0.0));
  v.push_back(inst(m::kCentralityClass, "central/peripheral", L::Plastic, "topological", kObj, K::Binary,
                   std::nullopt, 0.0));

  v.push_back(image(m::kTags, "main topic tags", L::Figurative, "general", K::Jaccard));

  v.push_back(image(m::kPeopleCount, "number of people", L::Figurative, "people", K::CountRatio));
  v.push_back(image(m::kGroupSize, "group size category", L::Figurative, "people", K::Binary, std::nullopt, 0.0));
  v.push_back(inst(m::kAge, "age", L::Figurative, "people", kFace, K::AbsError, std::pair{0.0, 100.0}));
  auto gender = inst(m::kGender, "gender", L::Figurative, "people", kFace, K::Cosine);
  gender.labels = labels.gender;
  v.push_back(gender);
  auto ethnicity = inst(m::kEthnicity, "ethnicity", L::Figurative, "people", kFace, K::Cosine);
  ethnicity.labels = labels.ethnicity;
  v.push_back(ethnicity);
  auto attributes = inst(m::kFaceAttributes, "face attributes", L::Figurative, "people", kFace, K::Cosine);
  attributes.labels = labels.attributes;
  v.push_back(attributes);

  v.push_back(image(m::kObjectCount, "number of objects", L::Figurative, "objects", K::CountRatio));
  v.push_back(inst(m::kObjectCategory, "object category", L::Figurative, "objects", kObj, K::Binary));
  v.push_back(inst(m::kOcrText, "text in image", L::Figurative, "objects", kObj, K::Jaccard, std::nullopt, 0.0));

  v.push_back(image(m::kSceneClass, "scene class", L::Figurative, "settings", K::Cosine));
  v.push_back(image(m::kIndoorOutdoor, "indoor/outdoor", L::Figurative, "settings", K::Binary));
  v.push_back(image(m::kManmadeNatural, "man-made/natural", L::Figurative, "settings", K::Binary));

  v.push_back(image(m::kCaption, "caption", L::Figurative, "action", K::Cosine));

  v.push_back(inst(m::kArousal, "arousal", L::Figurative, "emotions", kFace, K::AbsError, signed_unit));
  auto emotion = inst(m::kEmotion, "emotion", L::Figurative, "emotions", kFace, K::Cosine);
  emotion.labels = labels.emotion;
  v.push_back(emotion);
  v.push_back(inst(m::kValence, "valence", L::Figurative, "emotions", kFace, K::AbsError, signed_unit));

  v.push_back(image(m::kSubjectDistance, "main subject distance", L::Enunciational, "framing", K::AbsError, unit));
  v.push_back(image(m::kCharacterDistance, "main character distance", L::Enunciational, "framing", K::AbsError, unit));
  v.push_back(image(m::kViewerIndoorOutdoor, "indoor/outdoor viewpoint", L::Enunciational, "framing", K::Binary));
  v.push_back(image(m::kFraming, "portrait/scene", L::Enunciational, "framing", K::Binary));
  v.push_back(image(m::kFaceRatio, "face/image ratio", L::Enunciational, "framing", K::AbsError, unit));

  v.push_back(inst(m::kHeadYaw, "head yaw", L::Enunciational, "pose_gaze", kFace, K::AbsError, angle));
  v.push_back(inst(m::kHeadPitch, "head pitch", L::Enunciational, "pose_gaze", kFace, K::AbsError, angle));
  v.push_back(inst(m::kHeadRoll, "head roll", L::Enunciational, "pose_gaze", kFace, K::AbsError, angle));
  v.push_back(inst(m::kGazeYaw, "gaze yaw", L::Enunciational, "pose_gaze", kFace, K::AbsError, angle));
  v.push_back(inst(m::kGazePitch, "gaze pitch", L::Enunciational, "pose_gaze", kFace, K::AbsError, angle));
  return v;
}

}  // namespace

std::string to_string(Level l) {
  switch (l) {
    case Level::Plastic: return "plastic";
    case Level::Figurative: return "figurative";
    case Level::Enunciational: return "enunciational";
  }
  return "plastic";
}

std::string to_string(Scope s) { return s == Scope::Image ? "image" : "instance"; }

std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::AbsError: return "abs_error";
    case MetricKind::Hellinger: return "hellinger";
    case MetricKind::PaletteCielab: return "palette_cielab";
    case MetricKind::Jaccard: return "jaccard";
    case MetricKind::ContinuousJaccard: return "continuous_jaccard";
    case MetricKind::Cosine: return "cosine";
    case MetricKind::Binary: return "binary";
    case MetricKind::CountRatio: return "count_ratio";
  }
  return "abs_error";
}

std::optional<Level> level_from_string(std::string_view s) {
  for (Level l : kLevels) {
    if (to_string(l) == s) return l;
  }
  return std::nullopt;
}

const std::vector<TraitInfo>& trait_catalog() {
  using S = ValueShape;
  static const std::vector<TraitInfo> catalog = {
      {m::kMedium, Scope::Image, kObj, S::Categorical},
      {m::kPalette, Scope::Image, kObj, S::Palette},
      {m::kGrayscale, Scope::Image, kObj, S::Categorical},
      {m::kHistogram, Scope::Image, kObj, S::Histograms},
      {m::kBrightness, Scope::Image, kObj, S::Scalar},
      {m::kSaturation, Scope::Image, kObj, S::Scalar},
      {m::kBackgroundDepth, Scope::Image, kObj, S::Scalar},
      {m::kCoverage, Scope::Image, kObj, S::Coverage},
      {m::kTags, Scope::Image, kObj, S::LabelSet},
      {m::kPeopleCount, Scope::Image, kObj, S::Scalar},
      {m::kGroupSize, Scope::Image, kObj, S::Categorical},
      {m::kObjectCount, Scope::Image, kObj, S::Scalar},
      {m::kSceneClass, Scope::Image, kObj, S::Confidence},
      {m::kIndoorOutdoor, Scope::Image, kObj, S::Categorical},
      {m::kManmadeNatural, Scope::Image, kObj, S::Categorical},
      {m::kCaption, Scope::Image, kObj, S::Embedding},
      {m::kSubjectDistance, Scope::Image, kObj, S::Scalar},
      {m::kCharacterDistance, Scope::Image, kObj, S::Scalar},
      {m::kViewerIndoorOutdoor, Scope::Image, kObj, S::Categorical},
      {m::kFraming, Scope::Image, kObj, S::Categorical},
      {m::kFaceRatio, Scope::Image, kObj, S::Scalar},
      {m::kVerticalRatio, Scope::Instance, kObj, S::Scalar},
      {m::kVerticalBand, Scope::Instance, kObj, S::Categorical},
      {m::kHorizontalRatio, Scope::Instance, kObj, S::Scalar},
      {m::kHorizontalBand, Scope::Instance, kObj, S::Categorical},
      {m::kCentrality, Scope::Instance, kObj, S::Scalar},
      {m::kCentralityClass, Scope::Instance, kObj, S::Categorical},
      {m::kInstanceDepth, Scope::Instance, kObj, S::Scalar},
      {m::kObjectCategory, Scope::Instance, kObj, S::Categorical},
      {m::kOcrText, Scope::Instance, kObj, S::LabelSet},
      {m::kAge, Scope::Instance, kFace, S::Scalar},
      {m::kGender, Scope::Instance, kFace, S::Confidence},
      {m::kEthnicity, Scope::Instance, kFace, S::Confidence},
      {m::kFaceAttributes, Scope::Instance, kFace, S::Confidence},
      {m::kArousal, Scope::Instance, kFace, S::Scalar},
      {m::kEmotion, Scope::Instance, kFace, S::Confidence},
      {m::kValence, Scope::Instance, kFace, S::Scalar},
      {m::kHeadYaw, Scope::Instance, kFace, S::Scalar},
      {m::kHeadPitch, Scope::Instance, kFace, S::Scalar},
      {m::kHeadRoll, Scope::Instance, kFace, S::Scalar},
      {m::kGazeYaw, Scope::Instance, kFace, S::Scalar},
      {m::kGazePitch, Scope::Instance, kFace, S::Scalar},
  };
  return catalog;
}

const TraitInfo* find_trait(std::string_view id) {
  for (const TraitInfo& t : trait_catalog()) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

MeasureRegistry::MeasureRegistry(std::vector<MeasureDescriptor> measures) : measures_(std::move(measures)) {
  for (std::size_t i = 0; i < measures_.size(); ++i) {
    const MeasureDescriptor& d = measures_[i];
    if (!index_.emplace(d.id, i).second) throw Error(Errc::RegistryMismatch, d.id, "duplicate measure id");
    const TraitInfo* t = find_trait(d.id);
    if (!t) throw Error(Errc::RegistryMismatch, d.id, "no trait with this id");
    if (t->scope != d.scope) throw Error(Errc::RegistryMismatch, d.id, "scope does not match the trait");
    if (d.scope == Scope::Instance && t->applies_to != d.applies_to) {
      throw Error(Errc::RegistryMismatch, d.id, "instance kind does not match the trait");
    }
    if (!metric_fits(d.metric, t->shape)) {
      throw Error(Errc::RegistryMismatch, d.id, "metric " + to_string(d.metric) + " does not fit the trait value");
    }
    if (d.metric == MetricKind::AbsError) {
      if (!d.range || !std::isfinite(d.range->first) || !std::isfinite(d.range->second) ||
          !(d.range->first < d.range->second)) {
        throw Error(Errc::RegistryMismatch, d.id, "scalar metric needs a finite range with min < max");
      }
    }
    if (!(d.weight >= 0.0) || !std::isfinite(d.weight)) {
      throw Error(Errc::RegistryMismatch, d.id, "weight must be finite and non-negative");
    }
    if (d.group.empty()) throw Error(Errc::RegistryMismatch, d.id, "group must be non-empty");
  }
}

const MeasureRegistry& MeasureRegistry::defaults() {
  static const MeasureRegistry registry(default_measures());
  return registry;
}

MeasureRegistry MeasureRegistry::from_json(const json& j) {
  auto fail = [](const std::string& where, const std::string& what) -> void {
    throw Error(Errc::RegistryMismatch, where, what);
  };
  if (!j.is_object() || !j.contains("measures") || !j["measures"].is_array()) {
    throw Error(Errc::RegistryMismatch, "registry", "expected an object with a \"measures\" array");
  }
  std::vector<MeasureDescriptor> out;
  for (const json& e : j["measures"]) {
    MeasureDescriptor d;
    try {
      d.id = e.at("id").get<std::string>();
      d.name = e.value("name", d.id);
      auto level = level_from_string(e.at("level").get<std::string>());
      if (!level) fail(d.id, "unknown level");
      d.level = *level;
      d.group = e.at("group").get<std::string>();
      const std::string scope = e.at("scope").get<std::string>();
      if (scope != "image" && scope != "instance") fail(d.id, "scope must be image or instance");
      d.scope = scope == "image" ? Scope::Image : Scope::Instance;
      if (d.scope == Scope::Instance) {
        const std::string kind = e.at("applies_to").get<std::string>();
        if (kind != "face" && kind != "object") fail(d.id, "applies_to must be face or object");
        d.applies_to = kind == "face" ? InstanceKind::Face : InstanceKind::Object;
      }
      auto metric = metric_from_string(e.at("metric").get<std::string>());
      if (!metric) fail(d.id, "unknown metric");
      d.metric = *metric;
      if (e.contains("range")) {
        const auto r = e.at("range").get<std::vector<double>>();
        if (r.size() != 2) fail(d.id, "range must be [min, max]");
        d.range = std::pair{r[0], r[1]};
      }
      d.weight = e.value("weight", 1.0);
      if (e.contains("labels")) d.labels = e.at("labels").get<std::vector<std::string>>();
    } catch (const json::exception& ex) {
      throw Error(Errc::RegistryMismatch, d.id.empty() ? "registry" : d.id, ex.what());
    }
    out.push_back(std::move(d));
  }
  return MeasureRegistry(std::move(out));
}

MeasureRegistry MeasureRegistry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, path, "cannot open measure registry");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(Errc::RegistryMismatch, path, e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json MeasureRegistry::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const MeasureDescriptor& d : measures_) {
    nlohmann::ordered_json e;
    e["id"] = d.id;
    e["name"] = d.name;
    e["level"] = to_string(d.level);
    e["group"] = d.group;
    e["scope"] = to_string(d.scope);
    if (d.scope == Scope::Instance) e["applies_to"] = d.applies_to == InstanceKind::Face ? "face" : "object";
    e["metric"] = to_string(d.metric);
    if (d.range) e["range"] = {d.range->first, d.range->second};
    e["weight"] = d.weight;
    if (!d.labels.empty()) e["labels"] = d.labels;
    arr.push_back(std::move(e));
  }
  nlohmann::ordered_json out;
  out["measures"] = std::move(arr);
  return out;
}

const MeasureDescriptor* MeasureRegistry::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &measures_[it->second];
}

const MeasureDescriptor& MeasureRegistry::at(std::string_view id) const {
  const MeasureDescriptor* d = find(id);
  if (!d) throw Error(Errc::UnknownMeasure, std::string(id));
  return *d;
}

std::vector<std::string> MeasureRegistry::groups(Level level) const {
  std::vector<std::string> out;
  for (const MeasureDescriptor& d : measures_) {
    if (d.level == level && std::find(out.begin(), out.end(), d.group) == out.end()) out.push_back(d.group);
  }
  return out;
}

std::vector<const MeasureDescriptor*> MeasureRegistry::group_measures(Level level, std::string_view group) const {
  std::vector<const MeasureDescriptor*> out;
  for (const MeasureDescriptor& d : measures_) {
    if (d.level == level && d.group == group) out.push_back(&d);
  }
  return out;
}

}  // namespace fresco
