#pragma once

// Golden outputs for the pair_a fixture, produced through the CLI so that the
// bytes compared are the bytes a user sees.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "fresco/tools/cli.hpp"

namespace fresco::test {

struct GoldenOutput {
  std::string name;  // path relative to the source root
  std::string bytes;
  int exit_code = 0;
};

inline GoldenOutput run_golden(std::string name, std::vector<std::string> args) {
  std::istringstream in;
  std::ostringstream out, err;
  GoldenOutput g;
  g.name = std::move(name);
  g.exit_code = tools::run_cli(args, in, out, err);
  g.bytes = g.exit_code == 0 ? out.str() : err.str();
  return g;
}

inline std::vector<GoldenOutput> pair_a_outputs(const std::filesystem::path& scratch) {
  const std::string archive = source_path("samples/pair_a.jsonl");
  const std::string emb = source_path("samples/pair_a.embeddings.tsv");
  std::vector<GoldenOutput> out;
  out.push_back(run_golden("samples/pair_a.traits.golden", {"--archive", archive, "derive"}));
  out.push_back(run_golden("samples/pair_a.score.golden", {"--archive", archive, "score", "img_00000", "img_00001", "--json"}));
  out.push_back(run_golden("tests/golden/pair_a.score.txt",
                           {"--archive", archive, "score", "img_00000", "img_00001", "--breakdown", "--depth", "3"}));
  out.push_back(run_golden("tests/golden/pair_a.consistency.csv",
                           {"--archive", archive, "consistency", "all", "--embeddings", emb, "--csv"}));

  std::filesystem::create_directories(scratch);
  const std::string table = (scratch / "pair_a.csv").string();
  GoldenOutput exported = run_golden("tests/golden/pair_a.csv", {"--archive", archive, "export", table});
  if (exported.exit_code == 0) {
    exported.bytes = slurp(table);
    out.push_back(exported);
    out.push_back({"tests/golden/pair_a.columns.csv", slurp(table + ".columns.csv"), 0});
  } else {
    out.push_back(exported);
  }
  return out;
}

inline std::string golden_path(const std::string& name) { return source_path(name); }

}  // namespace fresco::test
