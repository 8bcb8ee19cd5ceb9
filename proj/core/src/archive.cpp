#include "fresco/archive.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fresco/error.hpp"
#include "fresco/format.hpp"
#include "fresco/metrics.hpp"
#include "parallel.hpp"

namespace fresco {

namespace {

Errc errc_for(ViolationKind k) {
  switch (k) {
    case ViolationKind::DuplicateId: return Errc::DuplicateId;
    case ViolationKind::InvariantViolation: return Errc::InvariantViolation;
    default: return Errc::SchemaViolation;
  }
}

}  // namespace

Archive Archive::build(std::vector<ImageRecord> records, ArchiveConfig cfg) {
  cfg.traits.thresholds.validate();
  const std::vector<Violation> issues = validate_archive(records, cfg.schema);
  if (!issues.empty()) {
    const Violation& v = issues.front();
    std::string detail = v.message + " (image_id=" + v.image_id + ")";
    if (issues.size() > 1) detail += "; " + std::to_string(issues.size() - 1) + " more";
    throw Error(errc_for(v.kind), v.kind == ViolationKind::DuplicateId ? v.image_id : v.field, detail);
  }

  Archive a;
  a.cfg_ = std::move(cfg);
  a.records_ = std::move(records);
  a.index_.reserve(a.records_.size());
  for (std::size_t i = 0; i < a.records_.size(); ++i) {
    if (!a.index_.emplace(a.records_[i].image_id, i).second) {
      throw Error(Errc::DuplicateId, a.records_[i].image_id, "image_id appears more than once");
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  a.traits_.resize(a.records_.size());
  detail::parallel_chunks(a.records_.size(), a.workers(a.records_.size()),
                          [&](std::size_t begin, std::size_t end, std::size_t) {
                            for (std::size_t i = begin; i < end; ++i) {
                              a.traits_[i] = derive_traits(a.records_[i], a.cfg_.traits);
                            }
                          });
  a.stats_.derive_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  a.stats_.images = a.records_.size();
  for (const ImageRecord& r : a.records_) {
    for (const InstanceAnnotation& inst : r.instances) (inst.is_face() ? a.stats_.faces : a.stats_.objects)++;
  }
  return a;
}

std::optional<std::size_t> Archive::index_of(std::string_view image_id) const {
  auto it = index_.find(std::string(image_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Archive::require(std::string_view image_id) const {
  if (auto i = index_of(image_id)) return *i;
  throw Error(Errc::UnknownImage, std::string(image_id), "not in archive");
}

std::size_t Archive::workers(std::size_t items) const {
  const std::size_t w = detail::worker_count(items, 64);
  return cfg_.threads == 0 ? w : std::min(w, cfg_.threads);
}

std::string to_string(Window w) {
  switch (w) {
    case Window::Top: return "top";
    case Window::Median: return "median";
    case Window::Last: return "last";
  }
  return "top";
}

std::optional<Window> window_from_string(std::string_view s) {
  if (s == "top") return Window::Top;
  if (s == "median") return Window::Median;
  if (s == "last") return Window::Last;
  return std::nullopt;
}

namespace {

struct Scored {
  std::size_t index;
  double similarity;
};

template <typename ScoreFn>
RankedList rank_impl(const Archive& archive, std::size_t ref, const RankOptions& opts, ScoreFn&& score) {
  if (opts.k == 0) throw Error(Errc::InvalidConfig, "k", "k must be >= 1");
  const std::size_t n = archive.size();
  const std::size_t workers = archive.workers(n);
  std::vector<std::vector<Scored>> partial(workers);
  detail::parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    auto& out = partial[w];
    out.reserve(end - begin);
    for (std::size_t c = begin; c < end; ++c) {
      if (c == ref) continue;
      if (opts.prefilter && !opts.prefilter(archive, ref, c)) continue;
      out.push_back({c, score(c)});
    }
  });

  std::vector<Scored> all;
  all.reserve(n);
  for (auto& p : partial) all.insert(all.end(), p.begin(), p.end());
  std::sort(all.begin(), all.end(), [&](const Scored& x, const Scored& y) {
    if (x.similarity != y.similarity) return x.similarity > y.similarity;
    return archive.record(x.index).image_id < archive.record(y.index).image_id;
  });

  RankedList out;
  out.reference_id = archive.record(ref).image_id;
  out.k = opts.k;
  out.window = opts.window;
  out.candidates = all.size();
  const std::size_t k = std::min(opts.k, all.size());
  std::size_t start = 0;
  if (opts.window == Window::Median) start = (all.size() - k) / 2;
  if (opts.window == Window::Last) start = all.size() - k;
  for (std::size_t i = start; i < start + k; ++i) {
    out.entries.push_back({archive.record(all[i].index).image_id, all[i].similarity, i, std::nullopt});
  }
  return out;
}

}  // namespace

RankedList rank(const Archive& archive, std::string_view reference_id, const WeightConfig& w,
                const RankOptions& opts) {
  w.validate();
  const std::size_t ref = archive.require(reference_id);
  const ImageRecord& a = archive.record(ref);
  const TraitVector& ta = archive.traits(ref);
  RankedList out = rank_impl(archive, ref, opts, [&](std::size_t c) {
    return fresco_overall(a, archive.record(c), ta, archive.traits(c), w, archive.registry());
  });
  out.weights = w;
  if (opts.with_breakdown) {
    for (RankedEntry& e : out.entries) {
      const std::size_t c = archive.require(e.image_id);
      e.breakdown = fresco_score(a, archive.record(c), ta, archive.traits(c), w, archive.registry());
    }
  }
  return out;
}

RankedList rank_by_measure(const Archive& archive, std::string_view reference_id, std::string_view measure_id,
                           const RankOptions& opts, bool include_unpaired) {
  const MeasureDescriptor& d = archive.registry().at(measure_id);
  const std::size_t ref = archive.require(reference_id);
  const ImageRecord& a = archive.record(ref);
  const TraitVector& ta = archive.traits(ref);
  const MeasureScoreOptions mopts{include_unpaired};
  RankedList out = rank_impl(archive, ref, opts, [&](std::size_t c) {
    const ImageRecord& b = archive.record(c);
    const MatchResult match = d.scope == Scope::Instance ? match_instances(a, b) : MatchResult{};
    return measure_score(a, b, ta, archive.traits(c), d.id, match, mopts, archive.registry());
  });
  out.measure_id = d.id;
  out.include_unpaired = include_unpaired;
  return out;
}

nlohmann::ordered_json ranked_to_json(const RankedList& list) {
  nlohmann::ordered_json j;
  j["reference"] = list.reference_id;
  nlohmann::ordered_json q;
  if (list.weights) {
    q["weights"] = {{"alpha", list.weights->alpha}, {"beta", list.weights->beta}, {"gamma", list.weights->gamma}};
  }
  if (list.measure_id) {
    q["measure_id"] = *list.measure_id;
    q["include_unpaired"] = list.include_unpaired;
  }
  q["k"] = list.k;
  q["window"] = to_string(list.window);
  j["query"] = std::move(q);
  j["candidates"] = list.candidates;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const RankedEntry& e : list.entries) {
    nlohmann::ordered_json je;
    je["image_id"] = e.image_id;
    je["similarity"] = round_to(e.similarity, 10);
    je["position"] = e.position;
    if (e.breakdown) je["breakdown"] = breakdown_to_json(*e.breakdown);
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string ranked_to_text(const RankedList& list) {
  std::string out;
  for (const RankedEntry& e : list.entries) out += e.image_id + '\t' + format_fixed(e.similarity) + '\n';
  return out;
}

namespace {

template <typename Fn>
void for_each_value(const Archive& archive, const TraitInfo& info, Fn&& fn) {
  for (std::size_t i = 0; i < archive.size(); ++i) {
    const TraitVector& tv = archive.traits(i);
    if (info.scope == Scope::Image) {
      if (const MeasureValue* v = tv.find(info.id)) fn(*v);
    } else {
      for (const InstanceTraits& inst : tv.instances) {
        if (inst.kind != info.applies_to) continue;
        if (const MeasureValue* v = inst.find(info.id)) fn(*v);
      }
    }
  }
}

void finish(Distribution& d) {
  d.samples = std::accumulate(d.counts.begin(), d.counts.end(), std::size_t{0});
  d.fractions.assign(d.counts.size(), 0.0);
  if (d.samples == 0) return;
  for (std::size_t i = 0; i < d.counts.size(); ++i) {
    d.fractions[i] = static_cast<double>(d.counts[i]) / static_cast<double>(d.samples);
  }
}

}  // namespace

Distribution distribution(const Archive& archive, std::string_view measure_id, std::size_t bins) {
  const TraitInfo* info = find_trait(measure_id);
  if (!info) throw Error(Errc::UnknownMeasure, std::string(measure_id), "no such measure");
  if (bins == 0) throw Error(Errc::InvalidConfig, "bins", "bins must be >= 1");
  const MeasureDescriptor* desc = archive.registry().find(measure_id);

  Distribution d;
  d.measure_id = std::string(measure_id);

  switch (info->shape) {
    case ValueShape::Scalar: {
      std::vector<double> xs;
      for_each_value(archive, *info, [&](const MeasureValue& v) { xs.push_back(std::get<double>(v)); });
      double lo = 0.0, hi = 1.0;
      if (desc && desc->range) {
        lo = desc->range->first;
        hi = desc->range->second;
      } else if (!xs.empty()) {
        const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
        lo = *mn;
        hi = *mx > *mn ? *mx : *mn + 1.0;
      }
      d.kind = Distribution::Kind::Histogram;
      d.counts.assign(bins, 0);
      for (std::size_t b = 0; b <= bins; ++b) {
        d.edges.push_back(lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins));
      }
      for (std::size_t b = 0; b < bins; ++b) {
        d.labels.push_back("[" + format_rounded(d.edges[b], 6) + "," + format_rounded(d.edges[b + 1], 6) +
                           (b + 1 == bins ? "]" : ")"));
      }
      for (double x : xs) {
        const double t = (std::clamp(x, lo, hi) - lo) / (hi - lo);
        const auto b = std::min(bins - 1, static_cast<std::size_t>(std::floor(t * static_cast<double>(bins))));
        ++d.counts[b];
      }
      break;
    }
    case ValueShape::Categorical: {
      std::map<std::string, std::size_t> tally;
      for_each_value(archive, *info, [&](const MeasureValue& v) { ++tally[std::get<Categorical>(v).value]; });
      d.kind = Distribution::Kind::Tally;
      for (const auto& [label, n] : tally) {
        d.labels.push_back(label);
        d.counts.push_back(n);
      }
      break;
    }
    case ValueShape::LabelSet: {
      std::map<std::string, std::size_t> tally;
      for_each_value(archive, *info, [&](const MeasureValue& v) {
        for (const std::string& l : std::get<LabelSet>(v).labels) ++tally[l];
      });
      d.kind = Distribution::Kind::Tally;
      for (const auto& [label, n] : tally) {
        d.labels.push_back(label);
        d.counts.push_back(n);
      }
      break;
    }
    case ValueShape::Confidence: {
      std::vector<std::size_t> counts;
      for_each_value(archive, *info, [&](const MeasureValue& v) {
        const auto& vals = std::get<ConfidenceVector>(v).values;
        if (vals.empty()) return;
        const auto arg = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
        if (counts.size() < vals.size()) counts.resize(vals.size(), 0);
        ++counts[arg];
      });
      if (desc && counts.size() < desc->labels.size()) counts.resize(desc->labels.size(), 0);
      d.kind = Distribution::Kind::Tally;
      for (std::size_t c = 0; c < counts.size(); ++c) {
        d.labels.push_back(desc && c < desc->labels.size() ? desc->labels[c] : "class_" + std::to_string(c));
      }
      d.counts = std::move(counts);
      break;
    }
    default:
      throw Error(Errc::InvalidConfig, std::string(measure_id), "no distribution for this value type");
  }
  finish(d);
  return d;
}

std::string distribution_to_csv(const Distribution& d) {
  std::ostringstream os;
  os << "bin,count,fraction\n";
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    os << csv_escape(d.labels[i]) << ',' << d.counts[i] << ',' << format_rounded(d.fractions[i]) << '\n';
  }
  return os.str();
}

std::string distribution_to_plot(const Distribution& d) {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    if (d.kind == Distribution::Kind::Histogram) {
      os << format_rounded((d.edges[i] + d.edges[i + 1]) / 2.0);
    } else {
      os << d.labels[i];
    }
    os << '\t' << format_rounded(d.fractions[i]) << '\n';
  }
  return os.str();
}

nlohmann::ordered_json distribution_to_json(const Distribution& d) {
  nlohmann::ordered_json j;
  j["measure_id"] = d.measure_id;
  j["kind"] = d.kind == Distribution::Kind::Histogram ? "histogram" : "tally";
  j["samples"] = d.samples;
  if (d.kind == Distribution::Kind::Histogram) {
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (double e : d.edges) edges.push_back(round_to(e, 10));
    j["edges"] = std::move(edges);
  }
  j["labels"] = d.labels;
  j["counts"] = d.counts;
  nlohmann::ordered_json fr = nlohmann::ordered_json::array();
  for (double f : d.fractions) fr.push_back(round_to(f, 10));
  j["fractions"] = std::move(fr);
  return j;
}

namespace {

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

// Single CSV cell for a trait value. Histograms and embeddings are left out of
// the table (see exportable()).
std::string cell(const MeasureValue& v) {
  struct Visitor {
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(const Categorical& c) const { return c.value; }
    std::string operator()(const LabelSet& s) const {
      std::string out;
      for (std::size_t i = 0; i < s.labels.size(); ++i) out += (i ? ";" : "") + s.labels[i];
      return out;
    }
    std::string operator()(const ConfidenceVector& c) const { return join_numbers(c.values); }
    std::string operator()(const EmbeddingVector& e) const { return join_numbers(e.values); }
    std::string operator()(const Palette& p) const {
      std::string out;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ';';
        out += format_double(p[i].rgb[0]) + ' ' + format_double(p[i].rgb[1]) + ' ' + format_double(p[i].rgb[2]) +
               ':' + format_double(p[i].weight);
      }
      return out;
    }
    std::string operator()(const RgbHistograms&) const { return {}; }
    std::string operator()(const Coverage& c) const {
      std::string out;
      for (const auto& [label, f] : c.fractions) {
        if (!out.empty()) out += ';';
        out += label + '=' + format_double(f);
      }
      return out;
    }
  };
  return std::visit(Visitor{}, v);
}

bool exportable(const TraitInfo& t) { return t.shape != ValueShape::Histograms && t.shape != ValueShape::Embedding; }

std::string shape_name(ValueShape s) {
  switch (s) {
    case ValueShape::Scalar: return "number";
    case ValueShape::Categorical: return "category";
    case ValueShape::LabelSet: return "labels (;-separated)";
    case ValueShape::Confidence: return "confidences (;-separated)";
    case ValueShape::Embedding: return "embedding";
    case ValueShape::Palette: return "palette (r g b:weight;...)";
    case ValueShape::Histograms: return "histograms";
    case ValueShape::Coverage: return "coverage (class=fraction;...)";
  }
  return "value";
}

void write_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(row[i]);
  }
  os << '\n';
}

}  // namespace

std::size_t export_table(const Archive& archive, std::ostream& table, std::ostream& columns) {
  const std::size_t cap = archive.config().export_max_instances;
  std::vector<const TraitInfo*> image_traits, face_traits, object_traits;
  for (const TraitInfo& t : trait_catalog()) {
    if (!exportable(t)) continue;
    if (t.scope == Scope::Image) {
      image_traits.push_back(&t);
    } else {
      (t.applies_to == InstanceKind::Face ? face_traits : object_traits).push_back(&t);
    }
  }

  auto describe = [&](const TraitInfo& t) {
    const MeasureDescriptor* d = archive.registry().find(t.id);
    return d ? d->name : std::string();
  };

  std::vector<std::string> header{"image_id"};
  std::vector<std::vector<std::string>> dict{{"column", "measure_id", "scope", "instance", "value", "name"}};
  dict.push_back({"image_id", "", "image", "", "text", "image identifier"});
  for (const TraitInfo* t : image_traits) {
    const std::string col = std::string(t->id);
    header.push_back(col);
    dict.push_back({col, col, "image", "", shape_name(t->shape), describe(*t)});
  }
  auto add_instance_columns = [&](std::string_view prefix, const std::vector<const TraitInfo*>& traits) {
    for (std::size_t k = 0; k < cap; ++k) {
      const std::string base = std::string(prefix) + "_" + std::to_string(k) + "_";
      header.push_back(base + "id");
      dict.push_back({base + "id", "", "instance", std::string(prefix) + " " + std::to_string(k), "text",
                      "instance identifier"});
      for (const TraitInfo* t : traits) {
        header.push_back(base + std::string(t->id));
        dict.push_back({base + std::string(t->id), std::string(t->id), "instance",
                        std::string(prefix) + " " + std::to_string(k), shape_name(t->shape), describe(*t)});
      }
    }
  };
  add_instance_columns("face", face_traits);
  add_instance_columns("object", object_traits);

  write_row(table, header);
  for (const auto& row : dict) write_row(columns, row);

  for (std::size_t i = 0; i < archive.size(); ++i) {
    const TraitVector& tv = archive.traits(i);
    std::vector<std::string> row{tv.image_id};
    for (const TraitInfo* t : image_traits) {
      const MeasureValue* v = tv.find(t->id);
      row.push_back(v ? cell(*v) : std::string());
    }
    for (InstanceKind kind : {InstanceKind::Face, InstanceKind::Object}) {
      const auto& traits = kind == InstanceKind::Face ? face_traits : object_traits;
      std::size_t k = 0;
      for (const InstanceTraits& inst : tv.instances) {
        if (inst.kind != kind || k >= cap) continue;
        row.push_back(inst.instance_id);
        for (const TraitInfo* t : traits) {
          const MeasureValue* v = inst.find(t->id);
          row.push_back(v ? cell(*v) : std::string());
        }
        ++k;
      }
      for (; k < cap; ++k) row.insert(row.end(), traits.size() + 1, std::string());
    }
    write_row(table, row);
  }
  if (!table || !columns) throw Error(Errc::IoFailure, "export", "write failed");
  return archive.size();
}

std::size_t export_table(const Archive& archive, const std::string& path) {
  std::ofstream table(path, std::ios::binary);
  if (!table) throw Error(Errc::IoFailure, path, "cannot open for writing");
  const std::string dict_path = path + ".columns.csv";
  std::ofstream columns(dict_path, std::ios::binary);
  if (!columns) throw Error(Errc::IoFailure, dict_path, "cannot open for writing");
  const std::size_t n = export_table(archive, table, columns);
  table.flush();
  columns.flush();
  if (!table) throw Error(Errc::IoFailure, path, "write failed");
  if (!columns) throw Error(Errc::IoFailure, dict_path, "write failed");
  return n;
}

namespace {

nlohmann::ordered_json value_to_json(const MeasureValue& v) {
  struct Visitor {
    nlohmann::ordered_json operator()(double x) const { return round_to(x, 10); }
    nlohmann::ordered_json operator()(const Categorical& c) const { return c.value; }
    nlohmann::ordered_json operator()(const LabelSet& s) const { return s.labels; }
    nlohmann::ordered_json operator()(const ConfidenceVector& c) const { return rounded(c.values); }
    nlohmann::ordered_json operator()(const EmbeddingVector& e) const { return rounded(e.values); }
    nlohmann::ordered_json operator()(const Palette& p) const {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const PaletteEntry& e : p) {
        arr.push_back({{"rgb", {round_to(e.rgb[0], 10), round_to(e.rgb[1], 10), round_to(e.rgb[2], 10)}},
                       {"weight", round_to(e.weight, 10)}});
      }
      return arr;
    }
    nlohmann::ordered_json operator()(const RgbHistograms& h) const {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& ch : h.channels) arr.push_back(rounded(ch));
      return arr;
    }
    nlohmann::ordered_json operator()(const Coverage& c) const {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (const auto& [label, f] : c.fractions) obj[label] = round_to(f, 10);
      return obj;
    }
    static nlohmann::ordered_json rounded(const std::vector<double>& v) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (double x : v) arr.push_back(round_to(x, 10));
      return arr;
    }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace

nlohmann::ordered_json traits_to_json(const TraitVector& traits) {
  nlohmann::ordered_json j;
  j["image_id"] = traits.image_id;
  nlohmann::ordered_json image = nlohmann::ordered_json::object();
  for (const auto& [id, v] : traits.image) image[id] = value_to_json(v);
  j["image"] = std::move(image);
  nlohmann::ordered_json instances = nlohmann::ordered_json::array();
  for (const InstanceTraits& inst : traits.instances) {
    nlohmann::ordered_json ji;
    ji["instance_id"] = inst.instance_id;
    ji["kind"] = inst.kind == InstanceKind::Face ? "face" : "object";
    ji["category"] = inst.category;
    nlohmann::ordered_json vals = nlohmann::ordered_json::object();
    for (const auto& [id, v] : inst.values) vals[id] = value_to_json(v);
    ji["values"] = std::move(vals);
    instances.push_back(std::move(ji));
  }
  j["instances"] = std::move(instances);
  return j;
}

}  // namespace fresco
