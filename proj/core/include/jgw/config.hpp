#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "jgw/market.hpp"

namespace jgw {

/// Plain `key=value` lines; `#` starts a comment, blank lines are skipped.
/// Throws DataError on malformed or repeated keys.
std::map<std::string, std::string> parse_key_value(std::istream& in);
std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path);

/// Comma-separated reals, e.g. "90,180,365".
std::vector<double> parse_real_list(const std::string& text);

/// Strict real parse of the whole string.
double parse_real(const std::string& text, const std::string& what);

/// Apply recognised keys (horizon_days, offset, x0, tail_tol, classify_tol,
/// extinction_tol, max_iter, forecast_times, curve_t_max, curve_step).
/// Unknown keys throw DataError.
void apply_config(TrendConfig& config, const std::map<std::string, std::string>& values);

}  // namespace jgw
