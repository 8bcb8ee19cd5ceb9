#pragma once

// Hand-built records and small helpers shared by the unit and acceptance tests.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fresco/annotation.hpp"

namespace fresco::test {

inline std::string source_path(const std::string& rel) { return std::string(FRESCO_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

inline std::vector<double> one_hot(std::size_t n, std::size_t hot) {
  std::vector<double> v(n, 0.0);
  v[hot] = 1.0;
  return v;
}

// Smallest record that passes validation: one grey palette entry, flat histograms.
inline ImageRecord blank_record(const std::string& id, int width = 1000, int height = 1000, std::size_t bins = 4) {
  ImageRecord r;
  r.image_id = id;
  r.width = width;
  r.height = height;
  r.global.brightness = 0.5;
  r.global.saturation = 0.5;
  r.global.background_mean_depth = 0.5;
  r.global.palette = {{{128.0, 128.0, 128.0}, 1.0}};
  for (auto& ch : r.global.rgb_histograms.channels) ch = uniform(bins);
  return r;
}

inline InstanceAnnotation face(const std::string& id, BBox box, std::size_t emotion = 0) {
  InstanceAnnotation inst;
  inst.instance_id = id;
  inst.category = "face";
  inst.bbox = box;
  inst.mean_depth = 0.3;
  FaceAttributes f;
  f.age = 30.0;
  f.gender_conf = {0.5, 0.5};
  f.ethnicity_conf = uniform(6);
  f.emotion_conf = one_hot(8, emotion);
  f.attribute_conf = std::vector<double>(40, 0.5);
  inst.attributes = f;
  return inst;
}

inline InstanceAnnotation object(const std::string& id, const std::string& category, BBox box) {
  InstanceAnnotation inst;
  inst.instance_id = id;
  inst.category = category;
  inst.bbox = box;
  inst.mean_depth = 0.4;
  inst.attributes = ObjectAttributes{0.9, std::nullopt};
  return inst;
}

}  // namespace fresco::test
