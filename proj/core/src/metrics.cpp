#include "fresco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "fresco/color.hpp"
#include "fresco/error.hpp"

namespace fresco {

namespace {

constexpr double kNormTolerance = 1e-6;

void require_normalized(std::span<const double> h, const char* which) {
  double s = 0.0;
  for (double x : h) {
    if (!(x >= 0.0)) throw Error(Errc::NotNormalized, which, "negative or NaN bin");
    s += x;
  }
  if (std::abs(s - 1.0) > kNormTolerance) throw Error(Errc::NotNormalized, which, "bins sum to " + std::to_string(s));
}

}  // namespace

double hellinger_distance(std::span<const double> h1, std::span<const double> h2) {
  if (h1.size() != h2.size()) {
    throw Error(Errc::BinMismatch, "histogram",
                std::to_string(h1.size()) + " vs " + std::to_string(h2.size()) + " bins");
  }
  require_normalized(h1, "h1");
  require_normalized(h2, "h2");
  if (std::equal(h1.begin(), h1.end(), h2.begin())) return 0.0;
  double bc = 0.0;
  for (std::size_t i = 0; i < h1.size(); ++i) bc += std::sqrt(h1[i] * h2[i]);
  return std::sqrt(std::max(0.0, 1.0 - bc));
}

double hellinger_similarity(std::span<const double> h1, std::span<const double> h2) {
  return 1.0 - hellinger_distance(h1, h2);
}

double hellinger_similarity(const RgbHistograms& a, const RgbHistograms& b) {
  double total = 0.0;
  for (std::size_t c = 0; c < 3; ++c) total += hellinger_distance(a.channels[c], b.channels[c]);
  return std::clamp(1.0 - total / 3.0, 0.0, 1.0);
}

std::array<double, 3> palette_mean_rgb(const Palette& palette) {
  if (palette.empty()) throw Error(Errc::EmptyPalette, "palette");
  std::vector<const PaletteEntry*> order;
  order.reserve(palette.size());
  for (const PaletteEntry& e : palette) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const PaletteEntry* l, const PaletteEntry* r) {
    return std::tie(l->weight, l->rgb) < std::tie(r->weight, r->rgb);
  });
  std::array<double, 3> mean{0.0, 0.0, 0.0};
  double wsum = 0.0;
  for (const PaletteEntry* e : order) {
    for (std::size_t c = 0; c < 3; ++c) mean[c] += e->weight * e->rgb[c];
    wsum += e->weight;
  }
  if (!(wsum > 0.0)) throw Error(Errc::EmptyPalette, "palette", "zero total weight");
  for (double& c : mean) c = std::clamp(c / wsum, 0.0, 255.0);
  return mean;
}

double palette_similarity(const Palette& a, const Palette& b) {
  const auto ma = palette_mean_rgb(a);
  const auto mb = palette_mean_rgb(b);
  if (ma == mb) return 1.0;
  const double de = delta_e76(srgb_to_lab(ma), srgb_to_lab(mb));
  return 1.0 - std::min(de / 100.0, 1.0);
}

double jaccard_sorted(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

double jaccard_similarity(std::vector<std::string> a, std::vector<std::string> b) {
  for (auto* v : {&a, &b}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  return jaccard_sorted(a, b);
}

double continuous_jaccard(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  if (a.empty() && b.empty()) return 1.0;
  double num = 0.0;
  double den = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      den += ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      den += ib->second;
      ++ib;
    } else {
      num += std::min(ia->second, ib->second);
      den += std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  if (den == 0.0) return 1.0;  // every class at zero coverage in both maps
  return std::clamp(num / den, 0.0, 1.0);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b, CosineMode mode) {
  if (a.size() != b.size()) {
    throw Error(Errc::DimensionMismatch, "vector", std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(Errc::ZeroVector, "vector");
  const double cos = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
  if (mode == CosineMode::Signed) return (cos + 1.0) / 2.0;
  return std::clamp(cos, 0.0, 1.0);
}

double scalar_similarity(double x, double y, double min, double max) {
  if (!(min < max)) throw Error(Errc::DegenerateRange, "range", std::to_string(min) + ".." + std::to_string(max));
  const double cx = std::clamp(x, min, max);
  const double cy = std::clamp(y, min, max);
  return std::clamp(1.0 - std::abs(cx - cy) / (max - min), 0.0, 1.0);
}

double count_similarity(double m, double n) {
  const double hi = std::max(m, n);
  if (hi <= 0.0) return 1.0;
  return std::min(m, n) / hi;
}

}  // namespace fresco
