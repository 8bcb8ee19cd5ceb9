#include "fresco/tools/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fresco/archive.hpp"
#include "fresco/consistency.hpp"
#include "fresco/error.hpp"
#include "fresco/format.hpp"
#include "fresco/record_io.hpp"
#include "fresco/synth.hpp"
#include "fresco/tools/engine_config.hpp"
#include "fresco/tools/service.hpp"

namespace fresco::tools {

namespace {

// Thrown for argument values CLI11 cannot check by itself.
struct UsageError {
  std::string message;
  const CLI::App* command;
};

struct Options {
  std::string config_path;
  std::vector<std::string> archives;
  std::string cache;

  std::string input;  // ingest

  std::string derive_id;

  std::string id_a, id_b;
  std::string weights;
  bool breakdown = false;
  bool json = false;
  int depth = -1;

  std::string reference;
  std::string level;
  std::string measure;
  std::size_t k = 8;
  std::string window = "top";
  bool exclude_unpaired = false;

  std::string what;
  std::vector<double> thresholds;
  std::string embeddings;
  std::string synsets;
  std::string concept_name = "person";
  bool csv = false;

  std::string dist_measure;
  std::size_t bins = 10;
  std::string format = "csv";

  std::string export_path;

  std::size_t n = 100;
  std::uint64_t seed = 7;
  std::string out_path;
  std::string embeddings_out;
  std::string truth_out;
  int faces = -1;
  int objects = -1;
  double duplicates = 0.02;

  std::string bind;
  std::string ui_dir;
};

class Runner {
 public:
  Runner(Options& o, std::istream& in, std::ostream& out, std::ostream& err)
      : o_(o), in_(in), out_(out), err_(err) {}

  void load_config() {
    if (!o_.config_path.empty()) cfg_ = EngineConfig::load_file(o_.config_path);
    if (!o_.cache.empty()) cfg_.cache_path = o_.cache;
    if (!o_.synsets.empty()) cfg_.synsets_path = o_.synsets;
    if (!o_.embeddings.empty()) cfg_.embeddings_path = o_.embeddings;
  }

  Archive archive() const {
    std::vector<std::string> paths = o_.archives.empty() ? cfg_.archives : o_.archives;
    if (paths.empty()) {
      if (!std::filesystem::exists(cfg_.cache_path)) {
        throw Error(Errc::IoFailure, cfg_.cache_path, "no archive loaded; run `fresco ingest <file>` or pass --archive");
      }
      paths.push_back(cfg_.cache_path);
    }
    const ArchiveConfig acfg = cfg_.archive_config();
    std::vector<ImageRecord> records;
    for (const std::string& p : paths) {
      std::vector<ImageRecord> part = read_archive_file(p, acfg.schema);
      records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return Archive::build(std::move(records), acfg);
  }

  int ingest() {
    const ArchiveConfig acfg = cfg_.archive_config();
    std::vector<ImageRecord> records =
        o_.input == "-" ? read_archive(in_, acfg.schema) : read_archive_file(o_.input, acfg.schema);
    const Archive a = Archive::build(std::move(records), acfg);
    std::ofstream cache(cfg_.cache_path, std::ios::binary);
    if (!cache) throw Error(Errc::IoFailure, cfg_.cache_path, "cannot write cache");
    write_archive(cache, a.records());
    cache.close();
    if (!cache) throw Error(Errc::IoFailure, cfg_.cache_path, "cannot write cache");
    const BuildStats& s = a.stats();
    out_ << "ingested " << s.images << " images (" << s.faces << " faces, " << s.objects << " objects) into "
         << cfg_.cache_path << '\n';
    return kExitOk;
  }

  int derive() {
    const Archive a = archive();
    if (!o_.derive_id.empty()) {
      out_ << traits_to_json(a.traits(a.require(o_.derive_id))).dump() << '\n';
      return kExitOk;
    }
    for (std::size_t i = 0; i < a.size(); ++i) out_ << traits_to_json(a.traits(i)).dump() << '\n';
    return kExitOk;
  }

  WeightConfig weights(const CLI::App* cmd) const {
    if (o_.weights.empty()) return cfg_.weights;
    auto w = parse_weights(o_.weights);
    if (!w) throw UsageError{"--weights expects three non-negative numbers a,b,g not all zero", cmd};
    w->node_weights = cfg_.weights.node_weights;
    return *w;
  }

  int score(const CLI::App* cmd) {
    const WeightConfig w = weights(cmd);
    const Archive a = archive();
    const std::size_t ia = a.require(o_.id_a);
    const std::size_t ib = a.require(o_.id_b);
    const ScoreBreakdown bd =
        fresco_score(a.record(ia), a.record(ib), a.traits(ia), a.traits(ib), w, a.registry());
    if (o_.json) {
      out_ << breakdown_to_json(bd).dump(2) << '\n';
    } else if (o_.breakdown) {
      out_ << breakdown_to_text(bd, o_.depth);
    } else {
      out_ << format_fixed(bd.overall()) << '\n';
    }
    return kExitOk;
  }

  int rank_cmd(const CLI::App* cmd) {
    RankOptions opts;
    opts.k = o_.k;
    if (opts.k == 0) throw UsageError{"--k must be >= 1", cmd};
    const auto window = window_from_string(o_.window);
    if (!window) throw UsageError{"--window expects top, median or last", cmd};
    opts.window = *window;
    opts.with_breakdown = o_.breakdown;
    if (!o_.level.empty() && !o_.measure.empty()) throw UsageError{"give --level or --measure, not both", cmd};
    if (!o_.level.empty() && !o_.weights.empty()) throw UsageError{"give --level or --weights, not both", cmd};

    RankedList list;
    if (!o_.measure.empty()) {
      const Archive a = archive();
      list = rank_by_measure(a, o_.reference, o_.measure, opts, !o_.exclude_unpaired);
    } else {
      WeightConfig w = weights(cmd);
      if (!o_.level.empty() && o_.level != "overall") {
        const auto level = level_from_string(o_.level);
        if (!level) throw UsageError{"--level expects plastic, figurative, enunciational or overall", cmd};
        w = WeightConfig::only(*level);
        w.node_weights = cfg_.weights.node_weights;
      }
      const Archive a = archive();
      list = rank(a, o_.reference, w, opts);
    }
    out_ << (o_.json ? ranked_to_json(list).dump(2) + "\n" : ranked_to_text(list));
    return kExitOk;
  }

  int consistency(const CLI::App* cmd) {
    std::vector<double> taus = o_.thresholds;
    if (taus.empty()) taus.assign(kDefaultOverlapThresholds.begin(), kDefaultOverlapThresholds.end());
    for (double t : taus) {
      if (!(t >= -1.0 && t <= 1.0)) throw UsageError{"--thresholds must lie in [-1, 1]", cmd};
    }
    const bool all = o_.what == "all";
    const bool presence = all || o_.what == "presence";
    const bool groups = all || o_.what == "groups";
    std::vector<std::pair<Task, Task>> pairs;
    if (all) {
      const Task vocab[] = {Task::Tagging, Task::ObjectDetection, Task::Semantic, Task::Panoptic};
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) pairs.emplace_back(vocab[i], vocab[j]);
      }
    } else if (!presence && !groups) {
      try {
        pairs.push_back(parse_task_pair(o_.what));
      } catch (const Error& e) {
        throw UsageError{std::string(e.what()) +
                             "; expected presence, groups, all or a pair such as tags-objects, semantic-panoptic",
                         cmd};
      }
    }

    const Archive a = archive();
    const SynsetConfig syn = cfg_.synsets();
    std::vector<std::string> sections;
    if (presence) {
      std::vector<PresenceResult> rows;
      for (Task t : kTasks) rows.push_back(people_presence(a.records(), syn, t, o_.concept_name));
      sections.push_back(o_.csv ? presence_to_csv(rows) : presence_to_text(rows));
    }
    if (groups) {
      std::vector<GroupDistribution> rows;
      for (Task t : kTasks) {
        if (is_counting(t)) {
          rows.push_back(group_distribution(a.records(), syn, t, cfg_.thresholds, o_.concept_name));
        }
      }
      sections.push_back(o_.csv ? groups_to_csv(rows) : groups_to_text(rows));
    }
    if (!pairs.empty()) {
      const EmbeddingTable emb = cfg_.embeddings();
      std::vector<OverlapReport> reports;
      for (const auto& [first, second] : pairs) reports.push_back(overlap_report(a.records(), first, second, emb, taus));
      sections.push_back(o_.csv ? overlap_to_csv(reports) : overlap_to_text(reports));
    }
    for (std::size_t i = 0; i < sections.size(); ++i) out_ << (i ? "\n" : "") << sections[i];
    return kExitOk;
  }

  int dist(const CLI::App* cmd) {
    if (o_.format != "csv" && o_.format != "plot" && o_.format != "json") {
      throw UsageError{"--format expects csv, plot or json", cmd};
    }
    if (o_.bins == 0) throw UsageError{"--bins must be >= 1", cmd};
    const Archive a = archive();
    const Distribution d = distribution(a, o_.dist_measure, o_.bins);
    if (o_.format == "json") {
      out_ << distribution_to_json(d).dump(2) << '\n';
    } else {
      out_ << (o_.format == "csv" ? distribution_to_csv(d) : distribution_to_plot(d));
    }
    return kExitOk;
  }

  int export_cmd() {
    const Archive a = archive();
    const std::size_t rows = export_table(a, o_.export_path);
    out_ << "wrote " << rows << " rows to " << o_.export_path << " (columns in " << o_.export_path
         << ".columns.csv)\n";
    return kExitOk;
  }

  int synth(const CLI::App* cmd) {
    if (!(o_.duplicates >= 0.0 && o_.duplicates <= 1.0)) throw UsageError{"--duplicates must lie in [0, 1]", cmd};
    SynthOptions so;
    so.n = o_.n;
    so.seed = o_.seed;
    so.duplicate_rate = o_.duplicates;
    if (o_.faces >= 0) so.fixed_faces = o_.faces;
    if (o_.objects >= 0) so.fixed_objects = o_.objects;
    const SynthOutput s = synthesize(so);
    if (o_.out_path.empty()) {
      write_archive(out_, s.records);
    } else {
      write_file(o_.out_path, [&](std::ostream& os) { write_archive(os, s.records); });
    }
    if (!o_.embeddings_out.empty()) write_file(o_.embeddings_out, [&](std::ostream& os) { s.vocabulary.write(os); });
    if (!o_.truth_out.empty()) {
      write_file(o_.truth_out, [&](std::ostream& os) { os << truth_to_json(s.truth).dump(2) << '\n'; });
    }
    return kExitOk;
  }

  int serve(const CLI::App* cmd) {
    const std::string bind = o_.bind.empty() ? cfg_.bind : o_.bind;
    const auto addr = parse_bind(bind);
    if (!addr) throw UsageError{"--bind expects host:port", cmd};
    if (!o_.ui_dir.empty()) cfg_.ui_dir = o_.ui_dir;
    const Archive a = archive();
    Service service(a, cfg_);
    err_ << "serving " << a.size() << " images on http://" << addr->first << ':' << addr->second << '\n';
    if (!service.listen(addr->first, addr->second)) {
      throw Error(Errc::IoFailure, bind, "cannot bind");
    }
    return kExitOk;
  }

 private:
  template <typename Fn>
  static void write_file(const std::string& path, Fn&& fn) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::IoFailure, path, "cannot open for writing");
    fn(os);
    os.close();
    if (!os) throw Error(Errc::IoFailure, path, "write failed");
  }

  Options& o_;
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
  EngineConfig cfg_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"FRESCO image similarity engine", "fresco"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config_path, "Engine config file")->envname("FRESCO_CONFIG");
  app.add_option("--archive", o.archives, "Archive file(s) to load instead of the ingest cache");
  app.add_option("--cache", o.cache, "Ingest cache path");

  auto* ingest = app.add_subcommand("ingest", "Validate an archive, build it and cache it");
  ingest->add_option("file", o.input, "Archive file, or - for stdin")->required();

  auto* derive = app.add_subcommand("derive", "Emit trait vectors as JSON lines");
  derive->add_option("--id", o.derive_id, "Only this image");

  auto* score = app.add_subcommand("score", "Similarity of two images");
  score->add_option("id_a", o.id_a)->required();
  score->add_option("id_b", o.id_b)->required();
  score->add_option("--weights", o.weights, "Level weights alpha,beta,gamma");
  score->add_flag("--breakdown", o.breakdown, "Print the score tree");
  score->add_option("--depth", o.depth, "Tree depth limit for --breakdown");
  score->add_flag("--json", o.json, "Print the score tree as JSON");

  auto* rank = app.add_subcommand("rank", "Rank the archive against a reference image");
  rank->add_option("id", o.reference)->required();
  rank->add_option("--level", o.level, "plastic, figurative, enunciational or overall");
  rank->add_option("--measure", o.measure, "Rank by a single measure id");
  rank->add_option("--weights", o.weights, "Level weights alpha,beta,gamma");
  rank->add_option("--k", o.k, "Window size");
  rank->add_option("--window", o.window, "top, median or last");
  rank->add_flag("--exclude-unpaired", o.exclude_unpaired, "With --measure: ignore unmatched instances");
  rank->add_flag("--json", o.json, "Print the ranked list as JSON");
  rank->add_flag("--breakdown", o.breakdown, "With --json: include score trees");

  auto* cons = app.add_subcommand("consistency", "Cross-model agreement reports");
  cons->add_option("what", o.what, "presence, groups, all, or a task pair such as tags-objects")->required();
  cons->add_option("--thresholds", o.thresholds, "Similarity thresholds")->delimiter(',');
  cons->add_option("--embeddings", o.embeddings, "Label embedding table");
  cons->add_option("--synsets", o.synsets, "Synset config");
  cons->add_option("--concept", o.concept_name, "Synset concept");
  cons->add_flag("--csv", o.csv, "CSV instead of aligned text");

  auto* dist = app.add_subcommand("dist", "Distribution of a measure over the archive");
  dist->add_option("measure", o.dist_measure)->required();
  dist->add_option("--bins", o.bins, "Histogram bins");
  dist->add_option("--format", o.format, "csv, plot or json");

  auto* exp = app.add_subcommand("export", "Write the trait table as CSV");
  exp->add_option("path", o.export_path)->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic archive");
  synth->add_option("--n", o.n, "Number of images");
  synth->add_option("--seed", o.seed, "Random seed");
  synth->add_option("--out", o.out_path, "Output file (default stdout)");
  synth->add_option("--embeddings-out", o.embeddings_out, "Write the label embedding table");
  synth->add_option("--truth", o.truth_out, "Write the planted ground truth as JSON");
  synth->add_option("--faces", o.faces, "Faces per image");
  synth->add_option("--objects", o.objects, "Objects per image");
  synth->add_option("--duplicates", o.duplicates, "Fraction of duplicated records");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--bind", o.bind, "host:port");
  serve->add_option("--ui", o.ui_dir, "Static UI directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Runner r(o, in, out, err);
  try {
    r.load_config();
    if (*ingest) return r.ingest();
    if (*derive) return r.derive();
    if (*score) return r.score(score);
    if (*rank) return r.rank_cmd(rank);
    if (*cons) return r.consistency(cons);
    if (*dist) return r.dist(dist);
    if (*exp) return r.export_cmd();
    if (*synth) return r.synth(synth);
    if (*serve) return r.serve(serve);
  } catch (const UsageError& e) {
    err << "usage error: " << e.message << "\n\n" << e.command->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace fresco::tools
