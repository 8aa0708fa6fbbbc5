#pragma once

#include <string>

namespace jgw {

/// Locale-independent decimal rendering with `significant` digits
/// (std::chars_format::general). Identical inputs give identical bytes.
std::string format_double(double value, int significant = 10);

/// Fixed-point rendering with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

}  // namespace jgw
