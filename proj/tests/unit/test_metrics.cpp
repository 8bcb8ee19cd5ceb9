#include <gtest/gtest.h>

#include <random>

#include "fresco/color.hpp"
#include "fresco/error.hpp"
#include "fresco/metrics.hpp"
#include "oracles.hpp"

using namespace fresco;

namespace {

std::vector<double> random_histogram(std::mt19937_64& rng, std::size_t bins) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> h(bins);
  double s = 0.0;
  for (double& x : h) s += (x = u(rng) < 0.2 ? 0.0 : u(rng));
  if (s == 0.0) h[0] = s = 1.0;
  for (double& x : h) x /= s;
  return h;
}

}  // namespace

TEST(Hellinger, MatchesDirectFormula) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_histogram(rng, 16);
    const auto q = random_histogram(rng, 16);
    EXPECT_NEAR(hellinger_distance(p, q), oracle::hellinger(p, q), 1e-12);
  }
}

TEST(Hellinger, KnownValues) {
  const std::vector<double> a{1.0, 0.0}, b{0.0, 1.0}, c{0.5, 0.5};
  EXPECT_DOUBLE_EQ(hellinger_distance(a, b), 1.0);
  EXPECT_DOUBLE_EQ(hellinger_similarity(a, b), 0.0);
  EXPECT_EQ(hellinger_distance(c, c), 0.0);
  EXPECT_NEAR(hellinger_distance(a, c), std::sqrt(1.0 - std::sqrt(0.5)), 1e-15);
}

TEST(Hellinger, ChannelDistancesAveragedBeforeSimilarity) {
  RgbHistograms x, y;
  x.channels = {std::vector<double>{1, 0}, std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}};
  y.channels = {std::vector<double>{0, 1}, std::vector<double>{1, 0}, std::vector<double>{0.5, 0.5}};
  EXPECT_NEAR(hellinger_similarity(x, y), 1.0 - 1.0 / 3.0, 1e-15);
  EXPECT_EQ(hellinger_similarity(x, x), 1.0);
}

TEST(Hellinger, Errors) {
  const std::vector<double> a{0.5, 0.5}, b{1.0 / 3, 1.0 / 3, 1.0 / 3}, bad{0.5, 0.6};
  try {
    hellinger_distance(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BinMismatch);
  }
  try {
    hellinger_distance(a, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotNormalized);
  }
}

TEST(Color, WhiteAndBlackAnchors) {
  const Lab white = srgb_to_lab({255, 255, 255});
  EXPECT_NEAR(white[0], 100.0, 1e-9);
  EXPECT_NEAR(white[1], 0.0, 1e-9);
  EXPECT_NEAR(white[2], 0.0, 1e-9);
  const Lab black = srgb_to_lab({0, 0, 0});
  EXPECT_EQ(black[0], 0.0);
  EXPECT_NEAR(delta_e76(white, black), 100.0, 1e-9);
}

TEST(Color, AgreesWithReferenceConversion) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  for (int i = 0; i < 500; ++i) {
    const std::array<double, 3> rgb{u(rng), u(rng), u(rng)};
    const Lab got = srgb_to_lab(rgb);
    const auto want = oracle::lab(rgb);
    // The reference uses 4-digit matrix constants.
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(got[c], want[c], 0.05) << rgb[0] << "," << rgb[1] << "," << rgb[2];
  }
  const auto red = oracle::lab({255, 0, 0});
  EXPECT_NEAR(red[0], 53.24, 0.01);
  EXPECT_NEAR(red[1], 80.09, 0.05);
  EXPECT_NEAR(red[2], 67.20, 0.05);
}

TEST(Palette, BlackVersusWhiteIsZero) {
  const Palette black{{{0, 0, 0}, 1.0}}, white{{{255, 255, 255}, 1.0}};
  EXPECT_NEAR(oracle::delta_e(oracle::lab({0, 0, 0}), oracle::lab({255, 255, 255})), 100.0, 1e-6);
  EXPECT_EQ(palette_similarity(black, white), 0.0);
  EXPECT_EQ(palette_similarity(black, black), 1.0);
}

TEST(Palette, WeightedMeanIsOrderFree) {
  const Palette p{{{10, 20, 30}, 0.25}, {{200, 100, 0}, 0.5}, {{0, 255, 0}, 0.25}};
  Palette q(p.rbegin(), p.rend());
  EXPECT_EQ(palette_mean_rgb(p), palette_mean_rgb(q));
  const auto m = palette_mean_rgb(p);
  EXPECT_NEAR(m[0], 102.5, 1e-12);
  EXPECT_NEAR(m[1], 118.75, 1e-12);
  EXPECT_NEAR(m[2], 7.5, 1e-12);
  EXPECT_EQ(palette_similarity(p, q), 1.0);
}

TEST(Palette, SimilarityFromDeltaE) {
  const Palette a{{{120, 60, 30}, 1.0}}, b{{{100, 90, 140}, 1.0}};
  const double de = oracle::delta_e(oracle::lab({120, 60, 30}), oracle::lab({100, 90, 140}));
  EXPECT_NEAR(palette_similarity(a, b), 1.0 - de / 100.0, 1e-3);
  EXPECT_NEAR(palette_similarity(a, b), palette_similarity(b, a), 1e-15);
}

TEST(Palette, EmptyThrows) {
  try {
    palette_similarity({}, {{{0, 0, 0}, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyPalette);
  }
}

TEST(Jaccard, Sets) {
  EXPECT_EQ(jaccard_similarity({}, {}), 1.0);
  EXPECT_EQ(jaccard_similarity({"a"}, {}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard_similarity({"a", "b", "c"}, {"b", "c", "d"}), 0.5);
  EXPECT_DOUBLE_EQ(jaccard_similarity({"a", "a", "b"}, {"b", "a"}), 1.0);
}

TEST(Jaccard, Continuous) {
  EXPECT_EQ(continuous_jaccard({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(continuous_jaccard({{"sky", 0.4}, {"sea", 0.2}}, {{"sky", 0.2}, {"road", 0.2}}), 0.2 / 0.8);
  EXPECT_EQ(continuous_jaccard({{"sky", 0.0}}, {{"sky", 0.0}}), 1.0);
}

TEST(Cosine, Modes) {
  const std::vector<double> a{1, 0}, b{0, 1}, c{-1, 0};
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b, CosineMode::Confidence), 0.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b, CosineMode::Signed), 0.5);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, c, CosineMode::Signed), 0.0);
  const std::vector<double> v{0.3, -0.7, 0.2};
  EXPECT_EQ(cosine_similarity(v, v, CosineMode::Signed), 1.0);
  EXPECT_THROW(cosine_similarity(a, std::vector<double>{1, 0, 0}, CosineMode::Signed), Error);
  EXPECT_THROW(cosine_similarity(a, std::vector<double>{0, 0}, CosineMode::Signed), Error);
}

TEST(Scalar, RangeNormalizedError) {
  EXPECT_DOUBLE_EQ(scalar_similarity(20, 45, 0, 100), 0.75);
  EXPECT_DOUBLE_EQ(scalar_similarity(-50, 200, 0, 100), 0.0);
  EXPECT_EQ(scalar_similarity(7, 7, 0, 100), 1.0);
  try {
    scalar_similarity(1, 2, 5, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DegenerateRange);
  }
}

TEST(Counts, Ratio) {
  EXPECT_EQ(count_similarity(0, 0), 1.0);
  EXPECT_EQ(count_similarity(0, 3), 0.0);
  EXPECT_DOUBLE_EQ(count_similarity(2, 8), 0.25);
  EXPECT_EQ(binary_similarity(std::string("x"), std::string("x")), 1.0);
  EXPECT_EQ(binary_similarity(1, 2), 0.0);
}

// Every metric stays in [0,1] and is symmetric on random inputs.
TEST(MetricProperties, BoundedAndSymmetric) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto p = random_histogram(rng, 8), q = random_histogram(rng, 8);
    const double h = hellinger_similarity(p, q);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0);
    EXPECT_EQ(h, hellinger_similarity(q, p));
    const Palette a{{{u(rng) * 255, u(rng) * 255, u(rng) * 255}, 1.0}};
    const Palette b{{{u(rng) * 255, u(rng) * 255, u(rng) * 255}, 1.0}};
    const double s = palette_similarity(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, palette_similarity(b, a), 1e-15);
    const double x = u(rng), y = u(rng);
    EXPECT_EQ(scalar_similarity(x, y, 0, 1), scalar_similarity(y, x, 0, 1));
  }
}
