#include "fresco/color.hpp"

#include <cmath>

namespace fresco {

namespace {

// sRGB (D65) primaries to XYZ.
constexpr double kM[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

double linearize(double c8) {
  const double c = c8 / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

std::array<double, 3> to_xyz(double r, double g, double b) {
  return {kM[0][0] * r + kM[0][1] * g + kM[0][2] * b,
          kM[1][0] * r + kM[1][1] * g + kM[1][2] * b,
          kM[2][0] * r + kM[2][1] * g + kM[2][2] * b};
}

}  // namespace

Lab srgb_to_lab(const std::array<double, 3>& rgb) {
  static const std::array<double, 3> white = to_xyz(1.0, 1.0, 1.0);
  const auto xyz = to_xyz(linearize(rgb[0]), linearize(rgb[1]), linearize(rgb[2]));
  const double fx = lab_f(xyz[0] / white[0]);
  const double fy = lab_f(xyz[1] / white[1]);
  const double fz = lab_f(xyz[2] / white[2]);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double delta_e76(const Lab& a, const Lab& b) {
  const double dl = a[0] - b[0];
  const double da = a[1] - b[1];
  const double db = a[2] - b[2];
  return std::sqrt(dl * dl + da * da + db * db);
}

}  // namespace fresco
