#pragma once

#include <array>

namespace fresco {

using Lab = std::array<double, 3>;

/// sRGB components in [0,255] to CIELAB under D65. The reference white is
/// taken from the same RGB->XYZ matrix, so (255,255,255) maps to exactly
/// L = 100, a = b = 0.
Lab srgb_to_lab(const std::array<double, 3>& rgb);

/// CIE76 colour difference (Euclidean distance in Lab).
double delta_e76(const Lab& a, const Lab& b);

}  // namespace fresco
