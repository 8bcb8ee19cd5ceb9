#include "fresco/matching.hpp"

#include <map>

namespace fresco {

std::string pool_key(const InstanceAnnotation& inst) {
  return inst.is_face() ? std::string("face") : "object/" + inst.category;
}

std::pair<double, double> normalized_centroid(const InstanceAnnotation& inst, const ImageRecord& rec) {
  return {inst.bbox.center_x() / static_cast<double>(rec.width),
          inst.bbox.center_y() / static_cast<double>(rec.height)};
}

CostMatrix centroid_cost_matrix(const ImageRecord& a, const std::vector<std::size_t>& rows, const ImageRecord& b,
                                const std::vector<std::size_t>& cols) {
  CostMatrix cost(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [ax, ay] = normalized_centroid(a.instances[rows[r]], a);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto [bx, by] = normalized_centroid(b.instances[cols[c]], b);
      const double dx = ax - bx;
      const double dy = ay - by;
      cost(r, c) = dx * dx + dy * dy;
    }
  }
  return cost;
}

namespace {

using Pools = std::map<std::string, std::vector<std::size_t>>;

Pools pools_of(const ImageRecord& rec) {
  Pools pools;
  for (std::size_t k = 0; k < rec.instances.size(); ++k) pools[pool_key(rec.instances[k])].push_back(k);
  return pools;
}

MatchResult match_oriented(const ImageRecord& a, const ImageRecord& b) {
  MatchResult out;
  const Pools pa = pools_of(a);
  const Pools pb = pools_of(b);
  static const std::vector<std::size_t> kEmpty;

  std::map<std::string, int> keys;
  for (const auto& [k, _] : pa) keys[k];
  for (const auto& [k, _] : pb) keys[k];

  for (const auto& [key, _] : keys) {
    auto ia = pa.find(key);
    auto ib = pb.find(key);
    const auto& rows = ia == pa.end() ? kEmpty : ia->second;
    const auto& cols = ib == pb.end() ? kEmpty : ib->second;
    const CostMatrix cost = centroid_cost_matrix(a, rows, b, cols);
    const Assignment asg = linear_sum_assignment(cost);
    for (const auto& [r, c] : asg.pairs) {
      out.pairs.push_back({rows[r], cols[c], a.instances[rows[r]].instance_id, b.instances[cols[c]].instance_id, key,
                           cost(r, c)});
    }
    out.total_cost += asg.total_cost;
    for (std::size_t r : asg.unmatched_rows) out.unmatched_i.push_back({rows[r], a.instances[rows[r]].instance_id, key});
    for (std::size_t c : asg.unmatched_cols) out.unmatched_j.push_back({cols[c], b.instances[cols[c]].instance_id, key});
  }
  return out;
}

}  // namespace

MatchResult match_instances(const ImageRecord& a, const ImageRecord& b) {
  if (b.image_id >= a.image_id) return match_oriented(a, b);
  MatchResult flipped = match_oriented(b, a);
  MatchResult out;
  out.total_cost = flipped.total_cost;
  out.pairs.reserve(flipped.pairs.size());
  for (const MatchedPair& p : flipped.pairs) out.pairs.push_back({p.index_j, p.index_i, p.id_j, p.id_i, p.pool, p.cost});
  out.unmatched_i = std::move(flipped.unmatched_j);
  out.unmatched_j = std::move(flipped.unmatched_i);
  return out;
}

}  // namespace fresco
