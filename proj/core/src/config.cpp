#include "jgw/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "jgw/errors.hpp"

namespace jgw {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

std::map<std::string, std::string> parse_key_value(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string text = trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw DataError("config: expected key=value", line);
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw DataError("config: empty key", line);
        if (!out.emplace(std::move(key), std::move(value)).second) throw DataError("config: repeated key", line);
    }
    return out;
}

std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config '" + path.string() + "'");
    return parse_key_value(in);
}

double parse_real(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
        throw DataError(what + ": expected a real number, got '" + text + "'");
    }
    return v;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_real(piece, "list"));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void apply_config(TrendConfig& config, const std::map<std::string, std::string>& values) {
    for (const auto& [key, value] : values) {
        if (key == "horizon_days") {
            config.horizon_days = parse_real(value, key);
        } else if (key == "offset") {
            const double v = parse_real(value, key);
            if (v != 0.0 && v != 1.0) throw DataError("config: offset must be 0 or 1");
            config.offset = static_cast<int>(v);
        } else if (key == "x0") {
            config.x0 = parse_real(value, key);
        } else if (key == "tail_tol") {
            config.tail_tol = parse_real(value, key);
        } else if (key == "classify_tol") {
            config.classify_tol = parse_real(value, key);
        } else if (key == "extinction_tol") {
            config.extinction.tol = parse_real(value, key);
        } else if (key == "max_iter") {
            const double v = parse_real(value, key);
            if (v < 1.0 || v != std::floor(v)) throw DataError("config: max_iter must be a positive integer");
            config.extinction.max_iter = static_cast<std::uint64_t>(v);
        } else if (key == "forecast_times") {
            config.forecast_times = parse_real_list(value);
        } else if (key == "curve_t_max") {
            config.curve_t_max = parse_real(value, key);
        } else if (key == "curve_step") {
            config.curve_step = parse_real(value, key);
        } else {
            throw DataError("config: unknown key '" + key + "'");
        }
    }
}

}  // namespace jgw
