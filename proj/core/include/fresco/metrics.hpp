#pragma once

// Per-measure similarity functions. Every function returns a value in
// [0,1], is symmetric in its arguments and returns exactly 1.0 on identical
// inputs.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fresco/annotation.hpp"

namespace fresco {

/// Hellinger distance sqrt(1 - BC) of one channel, BC = sum sqrt(h1 * h2).
/// Throws BinMismatch or NotNormalized (tolerance 1e-6).
double hellinger_distance(std::span<const double> h1, std::span<const double> h2);

/// 1 - distance for a single histogram.
double hellinger_similarity(std::span<const double> h1, std::span<const double> h2);

/// Channel distances are averaged first, then turned into a similarity.
double hellinger_similarity(const RgbHistograms& a, const RgbHistograms& b);

/// Weight-averaged palette colour as sRGB; entries are summed in a
/// canonical order so the result does not depend on palette ordering.
std::array<double, 3> palette_mean_rgb(const Palette& palette);

/// 1 - min(dE76 / 100, 1) between the two weight-averaged palette colours.
/// Throws EmptyPalette.
double palette_similarity(const Palette& a, const Palette& b);

/// |a n b| / |a u b| over sorted, duplicate-free ranges; both empty -> 1.
double jaccard_sorted(std::span<const std::string> a, std::span<const std::string> b);

/// Set Jaccard over arbitrary label lists (duplicates ignored).
double jaccard_similarity(std::vector<std::string> a, std::vector<std::string> b);

/// Sum of per-class minima over sum of maxima; both empty -> 1.
double continuous_jaccard(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

enum class CosineMode {
  Confidence,  // non-negative vectors, cosine already in [0,1]
  Signed,      // signed embeddings, remapped via (cos + 1) / 2
};

/// Throws DimensionMismatch or ZeroVector.
double cosine_similarity(std::span<const double> a, std::span<const double> b, CosineMode mode);

/// 1 - |x - y| / (max - min) with x, y clamped into the range. Throws
/// DegenerateRange unless min < max.
double scalar_similarity(double x, double y, double min, double max);

/// min(m, n) / max(m, n); both zero -> 1.
double count_similarity(double m, double n);

template <typename T>
double binary_similarity(const T& a, const T& b) {
  return a == b ? 1.0 : 0.0;
}

}  // namespace fresco
