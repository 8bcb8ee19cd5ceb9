#include "fresco/record_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "fresco/error.hpp"

namespace fresco {

namespace {

using json = nlohmann::json;

const std::set<std::string> kRecordFields = {"image_id", "width",   "height",  "medium", "global",  "instances",
                                             "coverage", "tags",    "caption", "scene",  "panoptic", "thumbnail"};
const std::set<std::string> kGlobalFields = {"brightness",  "saturation",     "grayscale",
                                             "palette",     "rgb_histograms", "background_mean_depth",
                                             "line_map_path"};
const std::set<std::string> kInstanceFields = {
    "instance_id",    "kind",    "category", "bbox",      "mean_depth", "age",           "gender_conf",
    "ethnicity_conf", "emotion_conf", "attribute_conf", "valence", "arousal", "head_pose", "gaze",
    "detector_conf",  "ocr_text"};

class Reader {
 public:
  explicit Reader(std::string image_id) : image_id_(std::move(image_id)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw Error(Errc::SchemaViolation, field, what + " (image_id=" + image_id_ + ")");
  }

  const json& require(const json& obj, const std::string& key, const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing required field");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected number");
    return v.get<double>();
  }

  int integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected integer");
    return v.get<int>();
  }

  bool boolean(const json& v, const std::string& path) const {
    if (!v.is_boolean()) fail(path, "expected boolean");
    return v.get<bool>();
  }

  std::string string(const json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected string");
    return v.get<std::string>();
  }

  const json& array(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected array");
    return v;
  }

  const json& object(const json& v, const std::string& path) const {
    if (!v.is_object()) fail(path, "expected object");
    return v;
  }

  std::vector<double> numbers(const json& v, const std::string& path) const {
    std::vector<double> out;
    out.reserve(array(v, path).size());
    for (const json& x : v) out.push_back(number(x, path));
    return out;
  }

  template <std::size_t N>
  std::array<double, N> fixed(const json& v, const std::string& path) const {
    auto values = numbers(v, path);
    if (values.size() != N) fail(path, "expected " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    std::copy(values.begin(), values.end(), out.begin());
    return out;
  }

  std::vector<std::string> strings(const json& v, const std::string& path) const {
    std::vector<std::string> out;
    for (const json& x : array(v, path)) out.push_back(string(x, path));
    return out;
  }

 private:
  std::string image_id_;
};

json collect_extras(const json& obj, const std::set<std::string>& known) {
  json extras = json::object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key())) extras[it.key()] = it.value();
  }
  return extras;
}

GlobalMeasures read_global(const Reader& r, const json& g) {
  GlobalMeasures out;
  r.object(g, "global");
  out.brightness = r.number(r.require(g, "brightness", "brightness"), "brightness");
  out.saturation = r.number(r.require(g, "saturation", "saturation"), "saturation");
  out.grayscale = r.boolean(r.require(g, "grayscale", "grayscale"), "grayscale");
  out.background_mean_depth =
      r.number(r.require(g, "background_mean_depth", "background_mean_depth"), "background_mean_depth");
  for (const json& e : r.array(r.require(g, "palette", "palette"), "palette")) {
    r.object(e, "palette");
    PaletteEntry entry;
    entry.rgb = r.fixed<3>(r.require(e, "rgb", "palette.rgb"), "palette.rgb");
    entry.weight = r.number(r.require(e, "weight", "palette.weight"), "palette.weight");
    out.palette.push_back(entry);
  }
  const json& hist = r.array(r.require(g, "rgb_histograms", "rgb_histograms"), "rgb_histograms");
  if (hist.size() != 3) r.fail("rgb_histograms", "expected three channels");
  for (std::size_t c = 0; c < 3; ++c) out.rgb_histograms.channels[c] = r.numbers(hist[c], "rgb_histograms");
  if (auto it = g.find("line_map_path"); it != g.end() && !it->is_null()) {
    out.line_map_path = r.string(*it, "line_map_path");
  }
  return out;
}

InstanceAnnotation read_instance(const Reader& r, const json& j) {
  r.object(j, "instances");
  InstanceAnnotation inst;
  inst.instance_id = r.string(r.require(j, "instance_id", "instances.instance_id"), "instances.instance_id");
  const std::string p = "instances[" + inst.instance_id + "].";
  const std::string kind = r.string(r.require(j, "kind", p + "kind"), p + "kind");
  inst.category = r.string(r.require(j, "category", p + "category"), p + "category");
  auto box = r.fixed<4>(r.require(j, "bbox", p + "bbox"), p + "bbox");
  inst.bbox = {box[0], box[1], box[2], box[3]};
  inst.mean_depth = r.number(r.require(j, "mean_depth", p + "mean_depth"), p + "mean_depth");

  if (kind == "face") {
    FaceAttributes f;
    f.age = r.number(r.require(j, "age", p + "age"), p + "age");
    f.gender_conf = r.numbers(r.require(j, "gender_conf", p + "gender_conf"), p + "gender_conf");
    f.ethnicity_conf = r.numbers(r.require(j, "ethnicity_conf", p + "ethnicity_conf"), p + "ethnicity_conf");
    f.emotion_conf = r.numbers(r.require(j, "emotion_conf", p + "emotion_conf"), p + "emotion_conf");
    f.attribute_conf = r.numbers(r.require(j, "attribute_conf", p + "attribute_conf"), p + "attribute_conf");
    f.valence = r.number(r.require(j, "valence", p + "valence"), p + "valence");
    f.arousal = r.number(r.require(j, "arousal", p + "arousal"), p + "arousal");
    f.head_pose = r.fixed<3>(r.require(j, "head_pose", p + "head_pose"), p + "head_pose");
    f.gaze = r.fixed<2>(r.require(j, "gaze", p + "gaze"), p + "gaze");
    inst.attributes = std::move(f);
  } else if (kind == "object") {
    ObjectAttributes o;
    o.detector_conf = r.number(r.require(j, "detector_conf", p + "detector_conf"), p + "detector_conf");
    if (auto it = j.find("ocr_text"); it != j.end() && !it->is_null()) o.ocr_text = r.strings(*it, p + "ocr_text");
    inst.attributes = std::move(o);
  } else {
    r.fail(p + "kind", "expected \"face\" or \"object\"");
  }
  inst.extras = collect_extras(j, kInstanceFields);
  return inst;
}

}  // namespace

ImageRecord record_from_json(const json& j, const SchemaConfig& schema) {
  if (!j.is_object()) throw Error(Errc::SchemaViolation, "record", "expected a JSON object");
  auto id_it = j.find("image_id");
  if (id_it == j.end() || !id_it->is_string()) {
    throw Error(Errc::SchemaViolation, "image_id", "missing or non-string image_id");
  }
  ImageRecord rec;
  rec.image_id = id_it->get<std::string>();
  Reader r(rec.image_id);

  rec.width = r.integer(r.require(j, "width", "width"), "width");
  rec.height = r.integer(r.require(j, "height", "height"), "height");
  if (auto it = j.find("medium"); it != j.end()) {
    auto m = medium_from_string(r.string(*it, "medium"));
    if (!m) r.fail("medium", "unknown medium");
    rec.medium = *m;
  }
  rec.global = read_global(r, r.require(j, "global", "global"));
  for (const json& inst : r.array(r.require(j, "instances", "instances"), "instances")) {
    rec.instances.push_back(read_instance(r, inst));
  }
  if (auto it = j.find("coverage"); it != j.end()) {
    for (auto c = r.object(*it, "coverage").begin(); c != it->end(); ++c) {
      rec.coverage[c.key()] = r.number(c.value(), "coverage." + c.key());
    }
  }
  if (auto it = j.find("tags"); it != j.end()) {
    for (const json& t : r.array(*it, "tags")) {
      r.object(t, "tags");
      TagEntry tag;
      tag.label = r.string(r.require(t, "label", "tags.label"), "tags.label");
      if (auto c = t.find("confidence"); c != t.end()) tag.confidence = r.number(*c, "tags.confidence");
      rec.tags.push_back(std::move(tag));
    }
  }
  if (auto it = j.find("caption"); it != j.end() && !it->is_null()) {
    r.object(*it, "caption");
    CaptionEntry cap;
    cap.text = r.string(r.require(*it, "text", "caption.text"), "caption.text");
    cap.embedding = r.numbers(r.require(*it, "embedding", "caption.embedding"), "caption.embedding");
    rec.caption = std::move(cap);
  }
  if (auto it = j.find("scene"); it != j.end() && !it->is_null()) {
    r.object(*it, "scene");
    SceneEntry scene;
    scene.confidence = r.numbers(r.require(*it, "confidence", "scene.confidence"), "scene.confidence");
    auto io = indoor_outdoor_from_string(
        r.string(r.require(*it, "indoor_outdoor", "scene.indoor_outdoor"), "scene.indoor_outdoor"));
    if (!io) r.fail("scene.indoor_outdoor", "expected \"indoor\" or \"outdoor\"");
    auto mn = manmade_natural_from_string(
        r.string(r.require(*it, "manmade_natural", "scene.manmade_natural"), "scene.manmade_natural"));
    if (!mn) r.fail("scene.manmade_natural", "expected \"manmade\" or \"natural\"");
    scene.indoor_outdoor = *io;
    scene.manmade_natural = *mn;
    rec.scene = std::move(scene);
  }
  if (auto it = j.find("panoptic"); it != j.end()) {
    for (const json& s : r.array(*it, "panoptic")) {
      r.object(s, "panoptic");
      PanopticSegment seg;
      seg.label = r.string(r.require(s, "label", "panoptic.label"), "panoptic.label");
      if (auto t = s.find("thing"); t != s.end()) seg.thing = r.boolean(*t, "panoptic.thing");
      rec.panoptic.push_back(std::move(seg));
    }
  }
  if (auto it = j.find("thumbnail"); it != j.end() && !it->is_null()) rec.thumbnail = r.string(*it, "thumbnail");
  rec.extras = collect_extras(j, kRecordFields);

  for (const Violation& v : check_record(rec, schema)) {
    if (v.kind == ViolationKind::InvariantViolation) {
      throw Error(Errc::InvariantViolation, v.field, v.message + " (image_id=" + rec.image_id + ")");
    }
  }
  return rec;
}

ImageRecord parse_record(std::string_view text, const SchemaConfig& schema) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::MalformedRecord, "record", e.what());
  }
  return record_from_json(j, schema);
}

nlohmann::ordered_json record_to_json(const ImageRecord& rec) {
  using ojson = nlohmann::ordered_json;
  ojson j;
  j["image_id"] = rec.image_id;
  j["width"] = rec.width;
  j["height"] = rec.height;
  j["medium"] = to_string(rec.medium);

  ojson g;
  g["brightness"] = rec.global.brightness;
  g["saturation"] = rec.global.saturation;
  g["grayscale"] = rec.global.grayscale;
  ojson palette = ojson::array();
  for (const PaletteEntry& e : rec.global.palette) {
    ojson pe;
    pe["rgb"] = e.rgb;
    pe["weight"] = e.weight;
    palette.push_back(std::move(pe));
  }
  g["palette"] = std::move(palette);
  g["rgb_histograms"] = rec.global.rgb_histograms.channels;
  g["background_mean_depth"] = rec.global.background_mean_depth;
  if (rec.global.line_map_path) g["line_map_path"] = *rec.global.line_map_path;
  j["global"] = std::move(g);

  ojson instances = ojson::array();
  for (const InstanceAnnotation& inst : rec.instances) {
    ojson ij;
    ij["instance_id"] = inst.instance_id;
    ij["kind"] = inst.is_face() ? "face" : "object";
    ij["category"] = inst.category;
    ij["bbox"] = {inst.bbox.x, inst.bbox.y, inst.bbox.w, inst.bbox.h};
    ij["mean_depth"] = inst.mean_depth;
    if (inst.is_face()) {
      const FaceAttributes& f = inst.face();
      ij["age"] = f.age;
      ij["gender_conf"] = f.gender_conf;
      ij["ethnicity_conf"] = f.ethnicity_conf;
      ij["emotion_conf"] = f.emotion_conf;
      ij["attribute_conf"] = f.attribute_conf;
      ij["valence"] = f.valence;
      ij["arousal"] = f.arousal;
      ij["head_pose"] = f.head_pose;
      ij["gaze"] = f.gaze;
    } else {
      const ObjectAttributes& o = inst.object();
      ij["detector_conf"] = o.detector_conf;
      if (o.ocr_text) ij["ocr_text"] = *o.ocr_text;
    }
    for (auto it = inst.extras.begin(); it != inst.extras.end(); ++it) ij[it.key()] = it.value();
    instances.push_back(std::move(ij));
  }
  j["instances"] = std::move(instances);

  ojson coverage = ojson::object();
  for (const auto& [label, frac] : rec.coverage) coverage[label] = frac;
  j["coverage"] = std::move(coverage);

  ojson tags = ojson::array();
  for (const TagEntry& t : rec.tags) tags.push_back(ojson{{"label", t.label}, {"confidence", t.confidence}});
  j["tags"] = std::move(tags);

  if (rec.caption) {
    ojson cap;
    cap["text"] = rec.caption->text;
    cap["embedding"] = rec.caption->embedding;
    j["caption"] = std::move(cap);
  }
  if (rec.scene) {
    ojson scene;
    scene["confidence"] = rec.scene->confidence;
    scene["indoor_outdoor"] = to_string(rec.scene->indoor_outdoor);
    scene["manmade_natural"] = to_string(rec.scene->manmade_natural);
    j["scene"] = std::move(scene);
  }
  if (!rec.panoptic.empty()) {
    ojson pan = ojson::array();
    for (const PanopticSegment& s : rec.panoptic) pan.push_back(ojson{{"label", s.label}, {"thing", s.thing}});
    j["panoptic"] = std::move(pan);
  }
  if (rec.thumbnail) j["thumbnail"] = *rec.thumbnail;
  for (auto it = rec.extras.begin(); it != rec.extras.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string serialize_record(const ImageRecord& record) { return record_to_json(record).dump(); }

std::vector<ImageRecord> read_archive(std::istream& in, const SchemaConfig& schema) {
  std::vector<ImageRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_record(line, schema));
    } catch (const Error& e) {
      throw Error(e.code(), e.subject(), std::string(e.what()) + " at line " + std::to_string(line_no));
    }
  }
  return out;
}

std::vector<ImageRecord> read_archive_file(const std::string& path, const SchemaConfig& schema) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, path, "cannot open archive");
  return read_archive(in, schema);
}

void write_archive(std::ostream& out, const std::vector<ImageRecord>& records) {
  for (const ImageRecord& r : records) out << serialize_record(r) << '\n';
}

}  // namespace fresco
