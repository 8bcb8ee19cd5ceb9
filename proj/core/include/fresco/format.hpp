#pragma once

#include <string>

namespace fresco {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// `value` rounded to `decimals` places, then formatted shortest. Used by the
/// golden-file exports so that last-bit libm differences do not leak into bytes.
std::string format_rounded(double value, int decimals = 10);
double round_to(double value, int decimals);
/// Fixed-point text with exactly `decimals` places ("1.0000000000").
std::string format_fixed(double value, int decimals = 10);

/// RFC 4180 field quoting: wraps in quotes when the field holds a comma,
/// quote, CR or LF; doubles embedded quotes.
std::string csv_escape(const std::string& field);

}  // namespace fresco
