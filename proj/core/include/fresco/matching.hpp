#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fresco/annotation.hpp"
#include "fresco/assignment.hpp"

namespace fresco {

struct MatchedPair {
  std::size_t index_i = 0;  // into the first record's instances
  std::size_t index_j = 0;  // into the second record's instances
  std::string id_i;
  std::string id_j;
  std::string pool;
  double cost = 0.0;

  bool operator==(const MatchedPair&) const = default;
};

struct UnmatchedInstance {
  std::size_t index = 0;
  std::string id;
  std::string pool;

  bool operator==(const UnmatchedInstance&) const = default;
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<UnmatchedInstance> unmatched_i;
  std::vector<UnmatchedInstance> unmatched_j;
  double total_cost = 0.0;
};

/// Pool key of an instance: "face" for faces, "object/<label>" for objects.
std::string pool_key(const InstanceAnnotation& inst);

/// Centroid divided by the image's own width and height.
std::pair<double, double> normalized_centroid(const InstanceAnnotation& inst, const ImageRecord& rec);

/// Squared Euclidean distance between normalized centroids for every
/// cross-image pair of the given instance indices.
CostMatrix centroid_cost_matrix(const ImageRecord& a, const std::vector<std::size_t>& rows, const ImageRecord& b,
                                const std::vector<std::size_t>& cols);

/// Optimal per-pool assignment of instances between two images. Pools never
/// mix, so cross-category pairs cannot occur. The assignment is always solved
/// with the record of smaller image_id as rows, which makes the result
/// independent of argument order even when optima tie.
MatchResult match_instances(const ImageRecord& a, const ImageRecord& b);

}  // namespace fresco
