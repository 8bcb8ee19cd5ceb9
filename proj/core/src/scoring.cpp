#include "fresco/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "fresco/error.hpp"
#include "fresco/format.hpp"
#include "fresco/metrics.hpp"

namespace fresco {

void WeightConfig::validate() const {
  for (double w : {alpha, beta, gamma}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidConfig, "weights", "level weights must be >= 0");
  }
  if (!(alpha > 0.0 || beta > 0.0 || gamma > 0.0)) {
    throw Error(Errc::InvalidConfig, "weights", "at least one level weight must be > 0");
  }
  for (const auto& [path, w] : node_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidConfig, path, "node weights must be >= 0");
  }
}

double WeightConfig::level_weight(Level level) const {
  switch (level) {
    case Level::Plastic: return alpha;
    case Level::Figurative: return beta;
    case Level::Enunciational: return gamma;
  }
  return 0.0;
}

WeightConfig WeightConfig::only(Level level) {
  WeightConfig w;
  w.alpha = level == Level::Plastic ? 1.0 : 0.0;
  w.beta = level == Level::Figurative ? 1.0 : 0.0;
  w.gamma = level == Level::Enunciational ? 1.0 : 0.0;
  return w;
}

namespace {

const ScoreNode* find_node(const ScoreNode& node, std::string_view path) {
  if (node.path == path) return &node;
  for (const ScoreNode& c : node.children) {
    if (path.starts_with(c.path) || c.path == "overall") {
      if (const ScoreNode* hit = find_node(c, path)) return hit;
    }
  }
  return nullptr;
}

template <typename T>
const T& expect(const MeasureDescriptor& d, const MeasureValue& v) {
  const T* p = std::get_if<T>(&v);
  if (!p) throw Error(Errc::RegistryMismatch, d.id, "trait value does not fit metric " + to_string(d.metric));
  return *p;
}

}  // namespace

const ScoreNode* ScoreBreakdown::find(std::string_view path) const { return find_node(root, path); }

double measure_similarity(const MeasureDescriptor& d, const MeasureValue& a, const MeasureValue& b) {
  switch (d.metric) {
    case MetricKind::AbsError: {
      if (!d.range) throw Error(Errc::RegistryMismatch, d.id, "scalar metric without range");
      return scalar_similarity(expect<double>(d, a), expect<double>(d, b), d.range->first, d.range->second);
    }
    case MetricKind::CountRatio: return count_similarity(expect<double>(d, a), expect<double>(d, b));
    case MetricKind::Hellinger: return hellinger_similarity(expect<RgbHistograms>(d, a), expect<RgbHistograms>(d, b));
    case MetricKind::PaletteCielab: return palette_similarity(expect<Palette>(d, a), expect<Palette>(d, b));
    case MetricKind::Jaccard: return jaccard_sorted(expect<LabelSet>(d, a).labels, expect<LabelSet>(d, b).labels);
    case MetricKind::ContinuousJaccard:
      return continuous_jaccard(expect<Coverage>(d, a).fractions, expect<Coverage>(d, b).fractions);
    case MetricKind::Cosine: {
      if (std::holds_alternative<EmbeddingVector>(a)) {
        return cosine_similarity(std::get<EmbeddingVector>(a).values, expect<EmbeddingVector>(d, b).values,
                                 CosineMode::Signed);
      }
      return cosine_similarity(expect<ConfidenceVector>(d, a).values, expect<ConfidenceVector>(d, b).values,
                               CosineMode::Confidence);
    }
    case MetricKind::Binary: {
      if (a.index() != b.index()) throw Error(Errc::RegistryMismatch, d.id, "binary values of different shapes");
      return binary_similarity(a, b);
    }
  }
  throw Error(Errc::RegistryMismatch, d.id, "unknown metric");
}

namespace {

struct Eval {
  double value = 1.0;
  double weight = 0.0;  // effective weight in the parent's mean; 0 drops the node
  std::optional<ScoreNode> node;
};

class Evaluator {
 public:
  Evaluator(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
            const MatchResult& match, const WeightConfig& w, const MeasureRegistry& reg, bool tree)
      : a_(a), b_(b), ta_(ta), tb_(tb), match_(match), w_(w), reg_(reg), tree_(tree) {}

  Eval root() {
    std::vector<Eval> children;
    for (Level level : kLevels) {
      Eval e = level_eval(level);
      const double lw = w_.level_weight(level);
      e.weight = e.weight > 0.0 ? lw : 0.0;
      if (e.node) e.node->weight = lw;
      children.push_back(std::move(e));
    }
    return combine(children, "overall", "overall", 1.0);
  }

  Eval level_eval(Level level) {
    const std::string lpath = to_string(level);
    std::vector<Eval> children;
    for (const std::string& group : reg_.groups(level)) children.push_back(group_eval(level, lpath, group));
    return combine(children, lpath, lpath, 1.0);
  }

  Eval measure_eval(const MeasureDescriptor& d, const std::string& parent, bool include_unpaired) {
    const double weight = node_weight(parent, d.id, d.weight);
    try {
      return d.scope == Scope::Image ? image_measure(d, parent, weight)
                                     : instance_measure(d, parent, weight, include_unpaired);
    } catch (const Error& e) {
      const std::string path = parent.empty() ? d.id : parent + "/" + d.id;
      if (e.subject() == path) throw;
      throw Error(e.code(), path, e.what());
    }
  }

 private:
  Eval group_eval(Level level, const std::string& lpath, const std::string& group) {
    const std::string gpath = lpath + "/" + group;
    std::vector<Eval> children;
    for (const MeasureDescriptor* d : reg_.group_measures(level, group)) {
      children.push_back(measure_eval(*d, gpath, true));
    }
    Eval e = combine(children, gpath, group, 1.0);
    if (e.weight > 0.0) e.weight = lookup(gpath, 1.0);
    if (e.node) e.node->weight = lookup(gpath, 1.0);
    return e;
  }

  double lookup(const std::string& path, double fallback) const {
    if (w_.node_weights.empty()) return fallback;
    auto it = w_.node_weights.find(path);
    return it == w_.node_weights.end() ? fallback : it->second;
  }

  double node_weight(const std::string& parent, const std::string& id, double fallback) const {
    if (w_.node_weights.empty()) return fallback;
    return lookup(parent + "/" + id, fallback);
  }

  Eval leaf(double value, double weight, const std::string& path, const std::string& name) const {
    Eval e{value, weight, std::nullopt};
    if (tree_) e.node = ScoreNode{path, name, value, weight, {}};
    return e;
  }

  Eval image_measure(const MeasureDescriptor& d, const std::string& parent, double weight) const {
    const MeasureValue* va = ta_.find(d.id);
    const MeasureValue* vb = tb_.find(d.id);
    double value;
    if (!va && !vb) {
      value = 1.0;
    } else if (!va || !vb) {
      value = 0.0;
    } else {
      value = measure_similarity(d, *va, *vb);
    }
    return leaf(value, weight, tree_ ? parent + "/" + d.id : std::string(), d.name);
  }

  Eval instance_measure(const MeasureDescriptor& d, const std::string& parent, double weight,
                        bool include_unpaired) const {
    const std::string path = tree_ ? parent + "/" + d.id : std::string();
    std::vector<ScoreNode> slots;
    double sum = 0.0;
    std::size_t pairs = 0;
    std::size_t unpaired = 0;

    for (const MatchedPair& p : match_.pairs) {
      if (ta_.instances[p.index_i].kind != d.applies_to) continue;
      const MeasureValue* va = ta_.instances[p.index_i].find(d.id);
      const MeasureValue* vb = tb_.instances[p.index_j].find(d.id);
      double s;
      if (!va && !vb) {
        s = 1.0;
      } else if (!va || !vb) {
        s = 0.0;
      } else {
        s = measure_similarity(d, *va, *vb);
      }
      sum += s;
      ++pairs;
      if (tree_) slots.push_back(ScoreNode{path + "/" + p.id_i + "~" + p.id_j, p.pool, s, 1.0, {}});
    }
    for (const UnmatchedInstance& u : match_.unmatched_i) {
      if (ta_.instances[u.index].kind != d.applies_to) continue;
      ++unpaired;
      if (tree_ && include_unpaired) slots.push_back(ScoreNode{path + "/" + u.id + "~", u.pool, 0.0, 1.0, {}});
    }
    for (const UnmatchedInstance& u : match_.unmatched_j) {
      if (tb_.instances[u.index].kind != d.applies_to) continue;
      ++unpaired;
      if (tree_ && include_unpaired) slots.push_back(ScoreNode{path + "/~" + u.id, u.pool, 0.0, 1.0, {}});
    }

    double value;
    if (include_unpaired) {
      const std::size_t n = pairs + unpaired;
      value = n == 0 ? 1.0 : sum / static_cast<double>(n);
    } else {
      value = pairs == 0 ? (unpaired == 0 ? 1.0 : 0.0) : sum / static_cast<double>(pairs);
    }
    Eval e = leaf(value, weight, path, d.name);
    if (e.node) e.node->children = std::move(slots);
    return e;
  }

  Eval combine(std::vector<Eval>& children, const std::string& path, const std::string& name, double weight) const {
    double num = 0.0;
    double den = 0.0;
    for (const Eval& c : children) {
      if (c.weight > 0.0) {
        num += c.weight * c.value;
        den += c.weight;
      }
    }
    Eval out;
    out.value = den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 1.0;
    out.weight = den > 0.0 ? weight : 0.0;
    if (tree_) {
      ScoreNode node{path, name, out.value, weight, {}};
      node.children.reserve(children.size());
      for (Eval& c : children) node.children.push_back(std::move(*c.node));
      out.node = std::move(node);
    }
    return out;
  }

  const ImageRecord& a_;
  const ImageRecord& b_;
  const TraitVector& ta_;
  const TraitVector& tb_;
  const MatchResult& match_;
  const WeightConfig& w_;
  const MeasureRegistry& reg_;
  bool tree_;
};

nlohmann::ordered_json node_to_json(const ScoreNode& n) {
  nlohmann::ordered_json j;
  j["path"] = n.path;
  j["name"] = n.name;
  j["similarity"] = round_to(n.similarity, 10);
  j["weight"] = round_to(n.weight, 10);
  if (!n.children.empty()) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ScoreNode& c : n.children) arr.push_back(node_to_json(c));
    j["children"] = std::move(arr);
  }
  return j;
}

void node_to_text(std::ostringstream& os, const ScoreNode& n, int depth, int max_depth) {
  if (max_depth >= 0 && depth > max_depth) return;
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << n.path << "  " << std::fixed << std::setprecision(6)
     << n.similarity;
  if (n.weight != 1.0) os << "  (w=" << format_double(n.weight) << ")";
  os << '\n';
  for (const ScoreNode& c : n.children) node_to_text(os, c, depth + 1, max_depth);
}

}  // namespace

ScoreBreakdown fresco_score(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
                            const WeightConfig& w, const MeasureRegistry& registry) {
  w.validate();
  ScoreBreakdown out;
  out.image_a = a.image_id;
  out.image_b = b.image_id;
  out.weights = w;
  out.match = match_instances(a, b);
  Evaluator ev(a, b, ta, tb, out.match, w, registry, true);
  out.root = std::move(*ev.root().node);
  return out;
}

double fresco_overall(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
                      const WeightConfig& w, const MeasureRegistry& registry) {
  const MatchResult match = match_instances(a, b);
  return Evaluator(a, b, ta, tb, match, w, registry, false).root().value;
}

double level_score(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
                   Level level, const MatchResult& match, const WeightConfig& w, const MeasureRegistry& registry) {
  return Evaluator(a, b, ta, tb, match, w, registry, false).level_eval(level).value;
}

double measure_score(const ImageRecord& a, const ImageRecord& b, const TraitVector& ta, const TraitVector& tb,
                     std::string_view measure_id, const MatchResult& match, MeasureScoreOptions opts,
                     const MeasureRegistry& registry) {
  const MeasureDescriptor& d = registry.at(measure_id);
  static const WeightConfig kDefault;
  Evaluator ev(a, b, ta, tb, match, kDefault, registry, false);
  return ev.measure_eval(d, to_string(d.level) + "/" + d.group, opts.include_unpaired).value;
}

nlohmann::ordered_json match_to_json(const MatchResult& match) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const MatchedPair& p : match.pairs) {
    pairs.push_back({{"a", p.id_i}, {"b", p.id_j}, {"pool", p.pool}, {"cost", round_to(p.cost, 10)}});
  }
  j["pairs"] = std::move(pairs);
  nlohmann::ordered_json ua = nlohmann::ordered_json::array();
  for (const UnmatchedInstance& u : match.unmatched_i) ua.push_back(u.id);
  nlohmann::ordered_json ub = nlohmann::ordered_json::array();
  for (const UnmatchedInstance& u : match.unmatched_j) ub.push_back(u.id);
  j["unmatched_a"] = std::move(ua);
  j["unmatched_b"] = std::move(ub);
  j["total_cost"] = round_to(match.total_cost, 10);
  return j;
}

nlohmann::ordered_json breakdown_to_json(const ScoreBreakdown& bd) {
  nlohmann::ordered_json j;
  j["image_a"] = bd.image_a;
  j["image_b"] = bd.image_b;
  j["weights"] = {{"alpha", bd.weights.alpha}, {"beta", bd.weights.beta}, {"gamma", bd.weights.gamma}};
  j["overall"] = round_to(bd.overall(), 10);
  j["match"] = match_to_json(bd.match);
  j["tree"] = node_to_json(bd.root);
  return j;
}

std::string breakdown_to_text(const ScoreBreakdown& bd, int max_depth) {
  std::ostringstream os;
  node_to_text(os, bd.root, 0, max_depth);
  return os.str();
}

}  // namespace fresco
