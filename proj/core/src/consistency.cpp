#include "fresco/consistency.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "fresco/error.hpp"
#include "fresco/format.hpp"
#include "parallel.hpp"

namespace fresco {

namespace {

struct TaskName {
  Task task;
  std::string_view name;
  std::string_view short_name;
};

constexpr TaskName kTaskNames[] = {
    {Task::FaceDetection, "face_detection", "faces"}, {Task::ObjectDetection, "object_detection", "objects"},
    {Task::Panoptic, "panoptic", "panoptic"},         {Task::Semantic, "semantic", "semantic"},
    {Task::Tagging, "tagging", "tags"},               {Task::Captioning, "captioning", "captions"},
};

const TaskName& task_name(Task t) {
  for (const TaskName& n : kTaskNames) {
    if (n.task == t) return n;
  }
  return kTaskNames[0];
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", round_to(fraction * 100.0, 10));
  return buf;
}

// Left-aligned first column, right-aligned others.
std::string align(const std::vector<std::vector<std::string>>& table) {
  std::vector<std::size_t> width;
  for (const auto& row : table) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : table) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string pad(width[i] - row[i].size(), ' ');
      if (i > 0) line += "  ";
      line += i == 0 ? row[i] + pad : pad + row[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

void require_records(std::span<const ImageRecord> records) {
  if (records.empty()) throw Error(Errc::EmptyArchive, "records", "no records");
}

}  // namespace

std::string to_string(Task t) { return std::string(task_name(t).name); }
std::string short_name(Task t) { return std::string(task_name(t).short_name); }

std::optional<Task> task_from_string(std::string_view s) {
  for (const TaskName& n : kTaskNames) {
    if (s == n.name || s == n.short_name) return n.task;
  }
  return std::nullopt;
}

bool is_counting(Task t) {
  return t == Task::FaceDetection || t == Task::ObjectDetection || t == Task::Panoptic;
}

void SynsetConfig::validate() const {
  for (const auto& [concept_name, tasks] : concepts) {
    for (const auto& [task, labels] : tasks) {
      if (!task_from_string(task)) throw Error(Errc::InvalidConfig, concept_name + "/" + task, "unknown task");
      if (labels.empty()) throw Error(Errc::InvalidConfig, concept_name + "/" + task, "empty label list");
    }
  }
}

const std::vector<std::string>& SynsetConfig::labels(std::string_view concept_name, Task task) const {
  auto c = concepts.find(std::string(concept_name));
  if (c != concepts.end()) {
    for (const auto& [name, labels] : c->second) {
      if (task_from_string(name) == task) return labels;
    }
  }
  throw Error(Errc::UnknownTask, to_string(task), "no synset labels for concept '" + std::string(concept_name) + "'");
}

SynsetConfig SynsetConfig::defaults() {
  SynsetConfig cfg;
  auto& person = cfg.concepts["person"];
  person["face_detection"] = {"face"};
  person["object_detection"] = {"person", "man", "woman", "boy", "girl", "child", "human"};
  person["panoptic"] = {"person"};
  person["semantic"] = {"person"};
  person["tagging"] = {"person", "people", "man", "woman", "boy", "girl", "child", "human", "portrait", "crowd"};
  person["captioning"] = {"person", "people", "man", "men", "woman", "women", "boy", "girl", "child", "children",
                          "family", "crowd", "couple", "player", "lady", "guy", "kid"};
  return cfg;
}

SynsetConfig SynsetConfig::from_json(const nlohmann::json& j) {
  SynsetConfig cfg;
  try {
    for (const auto& [concept_name, tasks] : j.at("concepts").items()) {
      for (const auto& [task, labels] : tasks.items()) {
        cfg.concepts[concept_name][task] = labels.get<std::vector<std::string>>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, "synsets", e.what());
  }
  cfg.validate();
  return cfg;
}

SynsetConfig SynsetConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, path, "cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, path, e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json SynsetConfig::to_json() const {
  nlohmann::ordered_json concepts_j = nlohmann::ordered_json::object();
  for (const auto& [concept_name, tasks] : concepts) {
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    // Task order, not alphabetical.
    for (const TaskName& n : kTaskNames) {
      for (const auto& [name, labels] : tasks) {
        if (task_from_string(name) == n.task) t[name] = labels;
      }
    }
    concepts_j[concept_name] = std::move(t);
  }
  return {{"concepts", std::move(concepts_j)}};
}

int concept_count(const ImageRecord& record, const SynsetConfig& synsets, Task task, std::string_view concept_name) {
  const std::vector<std::string>& labels = synsets.labels(concept_name, task);
  auto listed = [&](const std::string& label) { return std::find(labels.begin(), labels.end(), label) != labels.end(); };
  int n = 0;
  switch (task) {
    case Task::FaceDetection:
      for (const InstanceAnnotation& inst : record.instances) n += inst.is_face() && listed(inst.category);
      return n;
    case Task::ObjectDetection:
      for (const InstanceAnnotation& inst : record.instances) n += !inst.is_face() && listed(inst.category);
      return n;
    case Task::Panoptic:
      for (const PanopticSegment& seg : record.panoptic) n += seg.thing && listed(seg.label);
      return n;
    case Task::Semantic:
      for (const auto& [label, fraction] : record.coverage) {
        if (fraction > 0.0 && listed(label)) return 1;
      }
      return 0;
    case Task::Tagging:
      for (const TagEntry& tag : record.tags) {
        if (listed(tag.label)) return 1;
      }
      return 0;
    case Task::Captioning: {
      if (!record.caption) return 0;
      const std::string text = lower(record.caption->text);
      for (const std::string& phrase : labels) {
        if (text.find(lower(phrase)) != std::string::npos) return 1;
      }
      return 0;
    }
  }
  return 0;
}

PresenceResult people_presence(std::span<const ImageRecord> records, const SynsetConfig& synsets, Task task,
                               std::string_view concept_name) {
  synsets.labels(concept_name, task);
  require_records(records);
  PresenceResult out;
  out.task = task;
  out.images = records.size();
  std::size_t total = 0;
  for (const ImageRecord& r : records) {
    const int n = concept_count(r, synsets, task, concept_name);
    out.with_concept += n > 0;
    total += static_cast<std::size_t>(n);
  }
  out.fraction = static_cast<double>(out.with_concept) / static_cast<double>(out.images);
  if (is_counting(task)) out.mean_count = static_cast<double>(total) / static_cast<double>(out.images);
  return out;
}

GroupDistribution group_distribution(std::span<const ImageRecord> records, const SynsetConfig& synsets, Task task,
                                     const ThresholdConfig& cfg, std::string_view concept_name) {
  if (!is_counting(task)) throw Error(Errc::UnknownTask, to_string(task), "not a counting task");
  synsets.labels(concept_name, task);
  require_records(records);
  GroupDistribution out;
  out.task = task;
  for (const ImageRecord& r : records) {
    const int n = concept_count(r, synsets, task, concept_name);
    if (n == 0) continue;
    ++out.images_with_people;
    ++out.counts[static_cast<std::size_t>(discretize_group_size(n, cfg))];
  }
  if (out.images_with_people > 0) {
    for (std::size_t i = 0; i < kGroupCategories; ++i) {
      out.fractions[i] = static_cast<double>(out.counts[i]) / static_cast<double>(out.images_with_people);
    }
  }
  return out;
}

namespace {

std::vector<std::string> distinct(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct Candidate {
  double sim;
  std::size_t i;
  std::size_t j;
};

// Candidate pairs above the lowest threshold, sorted for greedy matching.
std::vector<Candidate> candidates(const std::vector<std::string>& a, const std::vector<std::string>& b,
                                  const EmbeddingTable& emb, double min_tau) {
  for (const auto& l : a) emb.at(l);
  for (const auto& l : b) emb.at(l);
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double s = a[i] == b[j] ? 1.0 : emb.cosine(a[i], b[j]);
      if (s >= min_tau) out.push_back({s, i, j});
    }
  }
  // Labels are sorted, so index order is lexicographic order.
  std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    return std::tie(x.i, x.j) < std::tie(y.i, y.j);
  });
  return out;
}

TopicOverlap greedy(const std::vector<Candidate>& cands, std::size_t na, std::size_t nb, double tau) {
  std::vector<bool> used_a(na, false), used_b(nb, false);
  std::size_t common = 0;
  for (const Candidate& c : cands) {
    if (c.sim < tau) break;
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    ++common;
  }
  return {na - common, common, nb - common};
}

}  // namespace

TopicOverlap topic_overlap(std::vector<std::string> labels_a, std::vector<std::string> labels_b,
                           const EmbeddingTable& emb, double tau) {
  const auto a = distinct(std::move(labels_a));
  const auto b = distinct(std::move(labels_b));
  return greedy(candidates(a, b, emb, tau), a.size(), b.size(), tau);
}

std::vector<std::string> task_labels(const ImageRecord& record, Task task) {
  std::vector<std::string> out;
  switch (task) {
    case Task::Tagging:
      for (const TagEntry& t : record.tags) out.push_back(t.label);
      break;
    case Task::ObjectDetection:
      for (const InstanceAnnotation& inst : record.instances) {
        if (!inst.is_face()) out.push_back(inst.category);
      }
      break;
    case Task::Semantic:
      for (const auto& [label, fraction] : record.coverage) {
        if (fraction > 0.0) out.push_back(label);
      }
      break;
    case Task::Panoptic:
      for (const PanopticSegment& seg : record.panoptic) {
        if (seg.thing) out.push_back(seg.label);
      }
      break;
    default:
      throw Error(Errc::UnknownTask, to_string(task), "task has no label vocabulary");
  }
  return distinct(std::move(out));
}

std::pair<Task, Task> parse_task_pair(std::string_view pair) {
  const auto dash = pair.find('-');
  if (dash == std::string_view::npos) throw Error(Errc::UnknownTask, std::string(pair), "expected <task>-<task>");
  const auto a = task_from_string(pair.substr(0, dash));
  const auto b = task_from_string(pair.substr(dash + 1));
  if (!a || !b) throw Error(Errc::UnknownTask, std::string(pair), "unknown task name");
  for (Task t : {*a, *b}) {
    if (t == Task::FaceDetection || t == Task::Captioning) {
      throw Error(Errc::UnknownTask, std::string(pair), to_string(t) + " has no label vocabulary");
    }
  }
  return {*a, *b};
}

OverlapReport overlap_report(std::span<const ImageRecord> records, Task first, Task second,
                             const EmbeddingTable& emb, std::span<const double> thresholds) {
  OverlapReport report;
  report.first = first;
  report.second = second;
  report.images = records.size();
  const double min_tau = thresholds.empty() ? 1.0 : *std::min_element(thresholds.begin(), thresholds.end());

  const std::size_t workers = detail::worker_count(records.size(), 256);
  std::vector<std::vector<TopicOverlap>> partial(workers, std::vector<TopicOverlap>(thresholds.size()));
  detail::parallel_chunks(records.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto a = task_labels(records[r], first);
      const auto b = task_labels(records[r], second);
      const auto cands = candidates(a, b, emb, min_tau);
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        const TopicOverlap o = greedy(cands, a.size(), b.size(), thresholds[t]);
        partial[w][t].first_only += o.first_only;
        partial[w][t].common += o.common;
        partial[w][t].second_only += o.second_only;
      }
    }
  });

  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    OverlapRow row;
    row.tau = thresholds[t];
    for (const auto& p : partial) {
      row.totals.first_only += p[t].first_only;
      row.totals.common += p[t].common;
      row.totals.second_only += p[t].second_only;
    }
    const std::size_t total = row.totals.first_only + row.totals.common + row.totals.second_only;
    if (total == 0) {
      row.in_common = 1.0;
    } else {
      const double d = static_cast<double>(total);
      row.in_first = static_cast<double>(row.totals.first_only) / d;
      row.in_common = static_cast<double>(row.totals.common) / d;
      row.in_second = static_cast<double>(row.totals.second_only) / d;
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace {

constexpr std::string_view kGroupHeaders[kGroupCategories] = {"single",       "couple",       "small_group",
                                                              "medium_group", "large_group",  "crowd"};

std::string pair_name(const OverlapReport& r) { return short_name(r.first) + "-" + short_name(r.second); }

}  // namespace

std::string presence_to_csv(std::span<const PresenceResult> rows) {
  std::ostringstream os;
  os << "task,images,with_people,fraction,mean_count\n";
  for (const PresenceResult& r : rows) {
    os << to_string(r.task) << ',' << r.images << ',' << r.with_concept << ',' << format_rounded(r.fraction) << ','
       << (r.mean_count ? format_rounded(*r.mean_count) : std::string()) << '\n';
  }
  return os.str();
}

std::string presence_to_text(std::span<const PresenceResult> rows) {
  std::vector<std::vector<std::string>> t{{"Task", "Images with people", "Mean count"}};
  for (const PresenceResult& r : rows) {
    char mean[32] = "-";
    if (r.mean_count) std::snprintf(mean, sizeof mean, "%.2f", round_to(*r.mean_count, 10));
    t.push_back({to_string(r.task), percent(r.fraction), mean});
  }
  return align(t);
}

std::string groups_to_csv(std::span<const GroupDistribution> rows) {
  std::ostringstream os;
  os << "task,images_with_people";
  for (auto h : kGroupHeaders) os << ',' << h;
  os << '\n';
  for (const GroupDistribution& g : rows) {
    os << to_string(g.task) << ',' << g.images_with_people;
    for (double f : g.fractions) os << ',' << format_rounded(f);
    os << '\n';
  }
  return os.str();
}

std::string groups_to_text(std::span<const GroupDistribution> rows) {
  std::vector<std::vector<std::string>> t{{"Task"}};
  for (auto h : kGroupHeaders) t[0].emplace_back(h);
  for (const GroupDistribution& g : rows) {
    std::vector<std::string> row{to_string(g.task)};
    for (double f : g.fractions) row.push_back(percent(f));
    t.push_back(std::move(row));
  }
  return align(t);
}

std::string overlap_to_csv(std::span<const OverlapReport> reports) {
  std::ostringstream os;
  os << "pair,tau,first_only,common,second_only,in_first,in_common,in_second\n";
  for (const OverlapReport& r : reports) {
    for (const OverlapRow& row : r.rows) {
      os << pair_name(r) << ',' << format_rounded(row.tau, 4) << ',' << row.totals.first_only << ','
         << row.totals.common << ',' << row.totals.second_only << ',' << format_rounded(row.in_first) << ','
         << format_rounded(row.in_common) << ',' << format_rounded(row.in_second) << '\n';
    }
  }
  return os.str();
}

std::string overlap_to_text(std::span<const OverlapReport> reports) {
  std::vector<std::vector<std::string>> t{{"Pair", "tau", "In first", "In common", "In second"}};
  for (const OverlapReport& r : reports) {
    for (const OverlapRow& row : r.rows) {
      char tau[16];
      std::snprintf(tau, sizeof tau, "%.2f", row.tau);
      t.push_back({pair_name(r), tau, percent(row.in_first), percent(row.in_common), percent(row.in_second)});
    }
  }
  return align(t);
}

}  // namespace fresco
