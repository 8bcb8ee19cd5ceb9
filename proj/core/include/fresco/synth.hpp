#pragma once

// Deterministic synthetic archive generator. Records look like the output of
// the extraction stage and pass validate_archive for every seed. The
// generator plants people counts, dominant emotions and duplicate records and
// reports them as ground truth, so archive-level analyses can be checked
// without a real dataset. Output depends only on the options: the random
// stream is mt19937_64 used directly (no std distributions) and every
// generated number is either an integer ratio or rounded to 4 decimals.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fresco/annotation.hpp"
#include "fresco/embedding.hpp"

namespace fresco {

struct SynthOptions {
  std::size_t n = 100;
  std::uint64_t seed = 7;
  std::size_t bins = 64;
  std::size_t palette_size = 5;
  std::size_t scene_classes = 16;
  std::size_t caption_dim = 32;
  std::size_t embedding_dim = 64;
  double duplicate_rate = 0.02;
  int max_people = 40;
  /// Force the instance counts of every record.
  std::optional<int> fixed_faces;
  std::optional<int> fixed_objects;
};

struct GroundTruth {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<int> people;                  // person objects per image, record order
  std::vector<int> faces;                   // face instances per image
  std::array<std::size_t, 6> group_counts{};  // group category tally over images with people
  std::vector<std::size_t> emotion_counts;  // dominant-emotion tally over all faces
  std::vector<std::pair<std::string, std::string>> duplicates;  // (original, copy)
};

struct SynthOutput {
  std::vector<ImageRecord> records;
  GroundTruth truth;
  /// Unit-norm text embeddings for every label the records use. Synonyms of
  /// one concept have cosines spread over roughly 0.6 to 0.97; labels of
  /// different concepts stay far below 0.8.
  EmbeddingTable vocabulary;
};

SynthOutput synthesize(const SynthOptions& opts = {});

nlohmann::ordered_json truth_to_json(const GroundTruth& truth);

}  // namespace fresco
