#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "fresco/error.hpp"
#include "fresco/tools/cli.hpp"
#include "fresco/tools/engine_config.hpp"

using namespace fresco;
using namespace fresco::tools;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun run(std::vector<std::string> args, const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("fresco_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  const CliRun r = run({"score", "only_one"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, MissingCacheIsDataError) {
  const CliRun r = run({"--cache", path("none.jsonl"), "derive"});
  EXPECT_EQ(r.code, kExitDataError);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, SynthIngestScoreRank) {
  const CliRun synth = run({"synth", "--n", "12", "--seed", "4", "--out", path("a.jsonl"), "--embeddings-out",
                         path("emb.tsv"), "--truth", path("truth.json")});
  ASSERT_EQ(synth.code, kExitOk) << synth.err;
  const CliRun ingest = run({"--cache", path("cache.jsonl"), "ingest", path("a.jsonl")});
  ASSERT_EQ(ingest.code, kExitOk) << ingest.err;
  EXPECT_TRUE(fs::exists(path("cache.jsonl")));

  const CliRun self = run({"--cache", path("cache.jsonl"), "score", "img_00003", "img_00003"});
  EXPECT_EQ(self.code, kExitOk);
  EXPECT_EQ(self.out, "1.0000000000\n");

  const CliRun ab = run({"--cache", path("cache.jsonl"), "score", "img_00001", "img_00002"});
  const CliRun ba = run({"--cache", path("cache.jsonl"), "score", "img_00002", "img_00001"});
  EXPECT_EQ(ab.out, ba.out);

  const CliRun tree = run({"--cache", path("cache.jsonl"), "score", "img_00001", "img_00002", "--breakdown", "--depth",
                        "2"});
  EXPECT_NE(tree.out.find("plastic/chromatic"), std::string::npos);

  const CliRun ranked = run({"--cache", path("cache.jsonl"), "rank", "img_00000", "--k", "8"});
  ASSERT_EQ(ranked.code, kExitOk) << ranked.err;
  EXPECT_EQ(std::count(ranked.out.begin(), ranked.out.end(), '\n'), 8);
  EXPECT_EQ(ranked.out.substr(0, 4), "img_");
  EXPECT_NE(ranked.out.find('\t'), std::string::npos);

  const CliRun by_level = run({"--cache", path("cache.jsonl"), "rank", "img_00000", "--level", "plastic", "--json"});
  ASSERT_EQ(by_level.code, kExitOk) << by_level.err;
  const auto j = nlohmann::json::parse(by_level.out);
  EXPECT_EQ(j["query"]["weights"]["alpha"], 1.0);
  EXPECT_EQ(j["query"]["weights"]["beta"], 0.0);

  EXPECT_EQ(run({"--cache", path("cache.jsonl"), "rank", "nobody"}).code, kExitDataError);
  EXPECT_EQ(run({"--cache", path("cache.jsonl"), "rank", "img_00000", "--window", "middle"}).code, kExitUsage);
}

TEST_F(CliTest, StdinPipelineAndTopicOverlap) {
  const CliRun synth = run({"synth", "--n", "100", "--seed", "7", "--embeddings-out", path("emb.tsv")});
  ASSERT_EQ(synth.code, kExitOk);
  ASSERT_EQ(run({"--cache", path("c.jsonl"), "ingest", "-"}, synth.out).code, kExitOk);
  const CliRun overlap = run({"--cache", path("c.jsonl"), "consistency", "tags-objects", "--embeddings", path("emb.tsv"),
                           "--csv"});
  ASSERT_EQ(overlap.code, kExitOk) << overlap.err;
  std::istringstream lines(overlap.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "pair,tau,first_only,common,second_only,in_first,in_common,in_second");
  int rows = 0;
  while (std::getline(lines, line)) {
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell == "tags-objects" ? 0.0 : std::stod(cell));
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_NEAR(cells[5] + cells[6] + cells[7], 1.0, 1e-4);
    ++rows;
  }
  EXPECT_EQ(rows, 3);

  const CliRun presence = run({"--cache", path("c.jsonl"), "consistency", "presence"});
  EXPECT_EQ(presence.code, kExitOk);
  EXPECT_NE(presence.out.find("object_detection"), std::string::npos);
  EXPECT_EQ(run({"--cache", path("c.jsonl"), "consistency", "tags-objects"}).code, kExitDataError);
}

TEST_F(CliTest, DistDeriveExport) {
  ASSERT_EQ(run({"synth", "--n", "10", "--out", path("a.jsonl")}).code, kExitOk);
  const std::string archive = path("a.jsonl");
  const CliRun dist = run({"--archive", archive, "dist", "1.2.2", "--bins", "5"});
  ASSERT_EQ(dist.code, kExitOk) << dist.err;
  EXPECT_EQ(std::count(dist.out.begin(), dist.out.end(), '\n'), 6);
  EXPECT_EQ(run({"--archive", archive, "dist", "1.2.2", "--format", "svg"}).code, kExitUsage);
  EXPECT_EQ(run({"--archive", archive, "dist", "no.such"}).code, kExitDataError);

  const CliRun one = run({"--archive", archive, "derive", "--id", "img_00001"});
  ASSERT_EQ(one.code, kExitOk);
  EXPECT_EQ(nlohmann::json::parse(one.out)["image_id"], "img_00001");
  const CliRun all = run({"--archive", archive, "derive"});
  EXPECT_EQ(std::count(all.out.begin(), all.out.end(), '\n'), 10);

  ASSERT_EQ(run({"--archive", archive, "export", path("t.csv")}).code, kExitOk);
  EXPECT_TRUE(fs::exists(path("t.csv")));
  EXPECT_TRUE(fs::exists(path("t.csv.columns.csv")));
}

TEST_F(CliTest, InvalidArchiveIsRejected) {
  std::ofstream(path("bad.jsonl")) << "{\"image_id\": 3}\n";
  const CliRun r = run({"--cache", path("c.jsonl"), "ingest", path("bad.jsonl")});
  EXPECT_EQ(r.code, kExitDataError);
  EXPECT_NE(r.err.find("SchemaViolation"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("c.jsonl")));
}

TEST(EngineConfig, ShippedConfigLoads) {
  const EngineConfig cfg = EngineConfig::load_file(test::source_path("config/engine.json"));
  EXPECT_EQ(cfg.export_max_instances, 8u);
  EXPECT_FALSE(cfg.registry_path.empty());
  EXPECT_EQ(cfg.archive_config().registry, MeasureRegistry::defaults());
  EXPECT_TRUE(cfg.archive_config().traits.person_labels.contains("woman"));
}

TEST(EngineConfig, RejectsMissingFiles) {
  nlohmann::json j = {{"registry", "does_not_exist.json"}};
  try {
    EngineConfig::from_json(j, "/tmp");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidConfig);
  }
}

TEST(EngineConfig, Parsers) {
  const auto w = parse_weights("0.5,1,0");
  ASSERT_TRUE(w);
  EXPECT_EQ(w->alpha, 0.5);
  EXPECT_EQ(w->gamma, 0.0);
  EXPECT_FALSE(parse_weights("1,2"));
  EXPECT_FALSE(parse_weights("a,b,c"));
  EXPECT_EQ(parse_bind("9000"), (std::pair<std::string, int>{"127.0.0.1", 9000}));
  EXPECT_EQ(parse_bind("0.0.0.0:81"), (std::pair<std::string, int>{"0.0.0.0", 81}));
  EXPECT_FALSE(parse_bind("host:port"));
}
