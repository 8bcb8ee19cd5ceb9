#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"
#include "fresco/error.hpp"
#include "fresco/measure_ids.hpp"
#include "fresco/scoring.hpp"
#include "fresco/synth.hpp"

using namespace fresco;

namespace {

struct Pair {
  ImageRecord a, b;
  TraitVector ta, tb;
};

const SynthOutput& corpus() {
  static const SynthOutput out = [] {
    SynthOptions o;
    o.n = 40;
    o.seed = 99;
    o.max_people = 8;
    return synthesize(o);
  }();
  return out;
}

Pair pair_of(std::size_t i, std::size_t j) {
  const auto& r = corpus().records;
  return {r[i], r[j], derive_traits(r[i]), derive_traits(r[j])};
}

void walk(const ScoreNode& n, const std::function<void(const ScoreNode&)>& fn) {
  fn(n);
  for (const ScoreNode& c : n.children) walk(c, fn);
}

bool is_slot(const ScoreNode& n) { return n.path.find('~') != std::string::npos; }
bool has_slots(const ScoreNode& n) { return !n.children.empty() && is_slot(n.children.front()); }

// Whether a node contributes to its parent: positive weight and, for internal
// nodes, at least one contributing child.
bool contributes(const ScoreNode& n) {
  if (!(n.weight > 0.0)) return false;
  if (n.children.empty() || has_slots(n)) return true;
  for (const ScoreNode& c : n.children)
    if (contributes(c)) return true;
  return false;
}

// Instance measures are the plain slot mean; every other internal node is
// the weighted mean of its contributing children (1 when there are none).
void expect_node_means(const ScoreNode& n) {
  if (n.children.empty()) return;
  if (has_slots(n)) {
    double s = 0.0;
    for (const ScoreNode& c : n.children) s += c.similarity;
    EXPECT_NEAR(n.similarity, s / static_cast<double>(n.children.size()), 1e-12) << n.path;
    return;
  }
  double num = 0.0, den = 0.0;
  for (const ScoreNode& c : n.children) {
    expect_node_means(c);
    if (contributes(c)) {
      num += c.weight * c.similarity;
      den += c.weight;
    }
  }
  EXPECT_NEAR(n.similarity, den > 0.0 ? num / den : 1.0, 1e-12) << n.path;
}

}  // namespace

TEST(Score, IdentityIsExactlyOne) {
  for (std::size_t i = 0; i < corpus().records.size(); ++i) {
    const Pair p = pair_of(i, i);
    const ScoreBreakdown bd = fresco_score(p.a, p.a, p.ta, p.ta);
    EXPECT_EQ(bd.overall(), 1.0) << p.a.image_id;
    walk(bd.root, [&](const ScoreNode& n) { EXPECT_EQ(n.similarity, 1.0) << n.path; });
  }
}

TEST(Score, SymmetricAtEveryNode) {
  for (std::size_t i = 0; i + 1 < corpus().records.size(); i += 2) {
    const Pair p = pair_of(i, i + 1);
    const ScoreBreakdown ab = fresco_score(p.a, p.b, p.ta, p.tb);
    const ScoreBreakdown ba = fresco_score(p.b, p.a, p.tb, p.ta);
    EXPECT_NEAR(ab.overall(), ba.overall(), 1e-12);
    walk(ab.root, [&](const ScoreNode& n) {
      if (is_slot(n)) return;  // slot names flip with the order
      const ScoreNode* m = ba.find(n.path);
      ASSERT_NE(m, nullptr) << n.path;
      EXPECT_NEAR(n.similarity, m->similarity, 1e-12) << n.path;
    });
  }
}

TEST(Score, BoundedAndTreeIsWeightedMean) {
  for (std::size_t i = 0; i + 3 < corpus().records.size(); i += 3) {
    const Pair p = pair_of(i, i + 3);
    const ScoreBreakdown bd = fresco_score(p.a, p.b, p.ta, p.tb);
    walk(bd.root, [](const ScoreNode& n) {
      EXPECT_GE(n.similarity, 0.0) << n.path;
      EXPECT_LE(n.similarity, 1.0) << n.path;
    });
    expect_node_means(bd.root);
    EXPECT_EQ(bd.overall(), fresco_overall(p.a, p.b, p.ta, p.tb));
  }
}

TEST(Score, OverallIsWeightedMeanOfLevels) {
  const Pair p = pair_of(1, 2);
  const WeightConfig w{0.2, 0.5, 0.3, {}};
  const ScoreBreakdown bd = fresco_score(p.a, p.b, p.ta, p.tb, w);
  const double pl = bd.find("plastic")->similarity;
  const double fi = bd.find("figurative")->similarity;
  const double en = bd.find("enunciational")->similarity;
  EXPECT_NEAR(bd.overall(), 0.2 * pl + 0.5 * fi + 0.3 * en, 1e-12);
  EXPECT_EQ(bd.find("plastic")->weight, 0.2);
}

TEST(Score, WeightScaleInvariance) {
  const Pair p = pair_of(3, 8);
  const double base = fresco_overall(p.a, p.b, p.ta, p.tb, {1, 2, 3, {}});
  EXPECT_NEAR(fresco_overall(p.a, p.b, p.ta, p.tb, {10, 20, 30, {}}), base, 1e-12);
}

TEST(Score, SingleLevelWeightsGiveLevelScore) {
  const Pair p = pair_of(4, 9);
  const MatchResult m = match_instances(p.a, p.b);
  for (Level level : kLevels) {
    const double overall = fresco_overall(p.a, p.b, p.ta, p.tb, WeightConfig::only(level));
    EXPECT_NEAR(overall, level_score(p.a, p.b, p.ta, p.tb, level, m), 1e-12) << to_string(level);
  }
}

TEST(Score, ZeroWeightLevelIsIgnored) {
  Pair p = pair_of(5, 6);
  const WeightConfig w{1, 1, 0, {}};
  const double before = fresco_overall(p.a, p.b, p.ta, p.tb, w);
  // Perturb enunciational-only inputs: pose and gaze on every face.
  for (auto& inst : p.b.instances) {
    if (!inst.is_face()) continue;
    auto f = inst.face();
    f.head_pose = {-80, 70, 10};
    f.gaze = {50, -40};
    inst.attributes = f;
  }
  p.tb = derive_traits(p.b);
  EXPECT_EQ(fresco_overall(p.a, p.b, p.ta, p.tb, w), before);
}

TEST(Score, ValidateWeights) {
  EXPECT_THROW((WeightConfig{0, 0, 0, {}}.validate()), Error);
  EXPECT_THROW((WeightConfig{-1, 1, 1, {}}.validate()), Error);
  EXPECT_NO_THROW((WeightConfig{0, 0, 1, {}}.validate()));
}

TEST(Score, NodeWeightOverrides) {
  const Pair p = pair_of(7, 10);
  WeightConfig w;
  w.node_weights["plastic/chromatic"] = 0.0;
  const ScoreBreakdown bd = fresco_score(p.a, p.b, p.ta, p.tb, w);
  EXPECT_NEAR(bd.find("plastic")->similarity, bd.find("plastic/topological")->similarity, 1e-12);
  w.node_weights.clear();
  w.node_weights["plastic/chromatic/1.2.2"] = 5.0;
  const ScoreBreakdown bd2 = fresco_score(p.a, p.b, p.ta, p.tb, w);
  EXPECT_EQ(bd2.find("plastic/chromatic/1.2.2")->weight, 5.0);
}

TEST(Instances, UnmatchedSlotsScoreZero) {
  ImageRecord a = test::blank_record("a"), b = test::blank_record("b");
  a.instances = {test::face("f0", {0, 0, 100, 100}), test::face("f1", {500, 500, 100, 100})};
  b.instances = {test::face("g0", {0, 0, 100, 100})};
  const TraitVector ta = derive_traits(a), tb = derive_traits(b);
  const ScoreBreakdown bd = fresco_score(a, b, ta, tb);
  const ScoreNode* age = bd.find("figurative/people/2.2.2.2");
  ASSERT_NE(age, nullptr);
  ASSERT_EQ(age->children.size(), 2u);
  EXPECT_EQ(age->children[0].path, "figurative/people/2.2.2.2/f0~g0");
  EXPECT_EQ(age->children[1].path, "figurative/people/2.2.2.2/f1~");
  EXPECT_DOUBLE_EQ(age->similarity, 0.5);
  // Object measures see no objects on either side.
  EXPECT_EQ(bd.find("plastic/topological/1.3.1")->similarity, 1.0);

  const MatchResult m = match_instances(a, b);
  EXPECT_DOUBLE_EQ(measure_score(a, b, ta, tb, measure::kAge, m), 0.5);
  EXPECT_DOUBLE_EQ(measure_score(a, b, ta, tb, measure::kAge, m, {false}), 1.0);
  EXPECT_DOUBLE_EQ(measure_score(a, b, ta, tb, measure::kBrightness, m), 1.0);
  EXPECT_THROW(measure_score(a, b, ta, tb, "9.9", m), Error);
}

TEST(Instances, OneSidedWithoutPairsIsZero) {
  ImageRecord a = test::blank_record("a"), b = test::blank_record("b");
  a.instances = {test::object("o0", "dog", {0, 0, 10, 10})};
  const TraitVector ta = derive_traits(a), tb = derive_traits(b);
  const MatchResult m = match_instances(a, b);
  EXPECT_EQ(measure_score(a, b, ta, tb, measure::kObjectCategory, m), 0.0);
  EXPECT_EQ(measure_score(a, b, ta, tb, measure::kObjectCategory, m, {false}), 0.0);
}

TEST(MissingValues, OneSidedCaptionScoresZero) {
  ImageRecord a = test::blank_record("a"), b = test::blank_record("b");
  TraitVector ta = derive_traits(a), tb = derive_traits(b);
  EXPECT_EQ(fresco_score(a, b, ta, tb).find("figurative/action/2.4.1")->similarity, 1.0);
  a.caption = CaptionEntry{"a dog", {0.6, 0.8}};
  ta = derive_traits(a);
  EXPECT_EQ(fresco_score(a, b, ta, tb).find("figurative/action/2.4.1")->similarity, 0.0);
}

TEST(MeasureSimilarity, ShapeMismatchThrows) {
  const MeasureDescriptor& d = MeasureRegistry::defaults().at(measure::kBrightness);
  try {
    measure_similarity(d, MeasureValue{Categorical{"x"}}, MeasureValue{0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RegistryMismatch);
  }
}

TEST(Output, JsonAndTextShapes) {
  const Pair p = pair_of(0, 1);
  const ScoreBreakdown bd = fresco_score(p.a, p.b, p.ta, p.tb);
  const auto j = breakdown_to_json(bd);
  EXPECT_EQ(j["image_a"], p.a.image_id);
  EXPECT_EQ(j["tree"]["path"], "overall");
  EXPECT_EQ(j["tree"]["children"].size(), 3u);
  EXPECT_TRUE(j["match"].contains("pairs"));
  const std::string text = breakdown_to_text(bd, 1);
  EXPECT_EQ(text.rfind("overall", 0), 0u);
  EXPECT_NE(text.find("  plastic"), std::string::npos);
  EXPECT_EQ(text.find("chromatic"), std::string::npos);
}
