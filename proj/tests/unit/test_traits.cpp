#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "fresco/error.hpp"
#include "fresco/measure_ids.hpp"
#include "fresco/traits.hpp"

using namespace fresco;
using fresco::test::blank_record;

namespace {

const std::string& categorical(const TraitVector& t, std::string_view id) { return std::get<Categorical>(*t.find(id)).value; }
double scalar(const TraitVector& t, std::string_view id) { return std::get<double>(*t.find(id)); }

}  // namespace

TEST(Bands, FortyTwentyFortySplit) {
  EXPECT_EQ(discretize_position(0.0), PositionBand::LowOrLeft);
  EXPECT_EQ(discretize_position(0.399999), PositionBand::LowOrLeft);
  EXPECT_EQ(discretize_position(0.4), PositionBand::Center);
  EXPECT_EQ(discretize_position(0.5), PositionBand::Center);
  EXPECT_EQ(discretize_position(0.6), PositionBand::Center);
  EXPECT_EQ(discretize_position(0.600001), PositionBand::HighOrRight);
  EXPECT_EQ(discretize_position(1.0), PositionBand::HighOrRight);
}

TEST(Bands, CustomProportions) {
  ThresholdConfig cfg;
  cfg.band_proportions = {0.25, 0.5, 0.25};
  EXPECT_EQ(discretize_position(0.3, cfg), PositionBand::Center);
  EXPECT_EQ(discretize_position(0.2, cfg), PositionBand::LowOrLeft);
  EXPECT_EQ(discretize_position(0.8, cfg), PositionBand::HighOrRight);
}

TEST(Centrality, EllipseBoundaryIsCentral) {
  EXPECT_EQ(classify_centrality(0.0), Centrality::Central);
  EXPECT_EQ(classify_centrality(0.6), Centrality::Central);
  EXPECT_EQ(classify_centrality(0.6000001), Centrality::Peripheral);
}

TEST(Centrality, RatiosFromBox) {
  // Centroid at (800, 500) in a 1000x1000 frame: 0.6 of the half-width off centre.
  const CentroidRatios r = centroid_ratios({750, 450, 100, 100}, 1000, 1000);
  EXPECT_DOUBLE_EQ(r.h_ratio, 0.8);
  EXPECT_DOUBLE_EQ(r.v_ratio, 0.5);
  EXPECT_NEAR(r.centrality, 0.6, 1e-12);
  // Non-square frame: the ellipse stretches with the image.
  const CentroidRatios wide = centroid_ratios({1550, 450, 100, 100}, 2000, 1000);
  EXPECT_NEAR(wide.centrality, 0.6, 1e-12);
  // Corners clamp to 1.
  EXPECT_DOUBLE_EQ(centroid_ratios({0, 0, 2, 2}, 1000, 1000).centrality, 1.0);
}

TEST(Centrality, ZeroDimensionThrows) {
  try {
    centroid_ratios({0, 0, 1, 1}, 0, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ZeroDimension);
    EXPECT_EQ(e.subject(), "width");
  }
}

TEST(Framing, FlipsStrictlyAboveThirtyPercent) {
  ImageRecord r = blank_record("a", 100, 100);
  r.instances.push_back(test::face("f0", {0, 0, 30, 100}));  // exactly 0.30
  FramingResult f = classify_framing(r);
  EXPECT_DOUBLE_EQ(f.face_ratio, 0.3);
  EXPECT_EQ(f.framing, Framing::Scene);
  r.instances[0].bbox = {0, 0, 31, 100};
  EXPECT_EQ(classify_framing(r).framing, Framing::Portrait);
}

TEST(Framing, LargestFaceDecides) {
  ImageRecord r = blank_record("a", 100, 100);
  r.instances.push_back(test::face("f0", {0, 0, 10, 10}));
  r.instances.push_back(test::face("f1", {10, 10, 60, 60}));
  r.instances.push_back(test::object("o0", "person", {0, 0, 100, 100}));  // objects never count
  const FramingResult f = classify_framing(r);
  EXPECT_DOUBLE_EQ(f.face_ratio, 0.36);
  EXPECT_EQ(f.framing, Framing::Portrait);
}

TEST(Framing, NoFacesIsScene) {
  const ImageRecord r = blank_record("a");
  EXPECT_EQ(classify_framing(r).framing, Framing::Scene);
  EXPECT_DOUBLE_EQ(classify_framing(r).face_ratio, 0.0);
}

TEST(GroupSize, BucketBoundaries) {
  const std::pair<int, GroupSize> table[] = {
      {1, GroupSize::Single},       {2, GroupSize::Couple},       {3, GroupSize::SmallGroup},
      {6, GroupSize::SmallGroup},   {7, GroupSize::MediumGroup},  {12, GroupSize::MediumGroup},
      {13, GroupSize::LargeGroup},  {30, GroupSize::LargeGroup},  {31, GroupSize::Crowd},
      {1000, GroupSize::Crowd},
  };
  for (const auto& [count, expected] : table) {
    EXPECT_EQ(discretize_group_size(count), expected) << count;
  }
}

TEST(GroupSize, Names) {
  EXPECT_EQ(to_string(GroupSize::SmallGroup), "small_group");
  EXPECT_EQ(to_string(GroupSize::MediumGroup), "medium_group");
}

TEST(Thresholds, ValidateRejectsBadConfig) {
  ThresholdConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.band_proportions = {0.5, 0.2, 0.4};
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.group_breaks = {1, 2, 2, 12, 30};
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.portrait_ratio = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.ellipse_factor = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Derive, ImageAndInstanceTraits) {
  ImageRecord r = blank_record("img", 1000, 500);
  r.tags = {{"tree", 0.9}, {"dog", 0.8}};
  r.instances.push_back(test::face("f0", {100, 100, 50, 50}));
  r.instances.push_back(test::object("o0", "man", {0, 0, 100, 100}));
  r.instances.push_back(test::object("o1", "dog", {450, 200, 100, 100}));
  const TraitVector t = derive_traits(r);

  EXPECT_EQ(t.image_id, "img");
  EXPECT_EQ(scalar(t, measure::kPeopleCount), 1.0);
  EXPECT_EQ(categorical(t, measure::kGroupSize), "single");
  EXPECT_EQ(scalar(t, measure::kObjectCount), 2.0);
  EXPECT_EQ(categorical(t, measure::kFraming), "scene");
  EXPECT_EQ(std::get<LabelSet>(*t.find(measure::kTags)).labels, (std::vector<std::string>{"dog", "tree"}));
  // Subject distance averages all objects, character distance only people.
  EXPECT_DOUBLE_EQ(scalar(t, measure::kSubjectDistance), 0.4);
  EXPECT_DOUBLE_EQ(scalar(t, measure::kCharacterDistance), 0.4);
  EXPECT_EQ(t.find(measure::kCaption), nullptr);

  ASSERT_EQ(t.instances.size(), 3u);
  EXPECT_EQ(t.instances[0].kind, InstanceKind::Face);
  EXPECT_NE(t.instances[0].find(measure::kAge), nullptr);
  EXPECT_EQ(t.instances[0].find(measure::kVerticalRatio), nullptr);

  const InstanceTraits& man = t.instances[1];
  EXPECT_EQ(std::get<Categorical>(*man.find(measure::kVerticalBand)).value, "top");
  EXPECT_EQ(std::get<Categorical>(*man.find(measure::kHorizontalBand)).value, "left");
  EXPECT_EQ(std::get<Categorical>(*man.find(measure::kCentralityClass)).value, "peripheral");

  const InstanceTraits& dog = t.instances[2];
  EXPECT_EQ(std::get<Categorical>(*dog.find(measure::kVerticalBand)).value, "center");
  EXPECT_EQ(std::get<Categorical>(*dog.find(measure::kHorizontalBand)).value, "center");
  EXPECT_EQ(std::get<Categorical>(*dog.find(measure::kCentralityClass)).value, "central");
  EXPECT_DOUBLE_EQ(std::get<double>(*dog.find(measure::kCentrality)), 0.0);
}

TEST(Derive, DistanceFallbacks) {
  ImageRecord r = blank_record("img");
  r.global.background_mean_depth = 0.9;
  TraitVector t = derive_traits(r);
  EXPECT_DOUBLE_EQ(scalar(t, measure::kSubjectDistance), 0.9);
  EXPECT_DOUBLE_EQ(scalar(t, measure::kCharacterDistance), 0.9);

  r.instances.push_back(test::face("f0", {0, 0, 10, 10}));
  r.instances.back().mean_depth = 0.2;
  t = derive_traits(r);
  EXPECT_DOUBLE_EQ(scalar(t, measure::kCharacterDistance), 0.2);
  EXPECT_DOUBLE_EQ(scalar(t, measure::kSubjectDistance), 0.9);
}

TEST(Derive, PersonSynsetIsConfigurable) {
  ImageRecord r = blank_record("img");
  r.instances.push_back(test::object("o0", "pedestrian", {0, 0, 10, 10}));
  EXPECT_EQ(count_people(r), 0);
  TraitConfig cfg;
  cfg.person_labels.insert("pedestrian");
  EXPECT_EQ(count_people(r, cfg), 1);
}

TEST(Derive, Deterministic) {
  ImageRecord r = blank_record("img");
  r.instances.push_back(test::object("o0", "car", {10, 10, 10, 10}));
  EXPECT_EQ(derive_traits(r), derive_traits(r));
}
