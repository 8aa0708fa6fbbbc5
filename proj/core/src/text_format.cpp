#include "jgw/text_format.hpp"

#include <array>
#include <charconv>

namespace jgw {

std::string format_double(double value, int significant) {
    std::array<char, 64> buf{};
    auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, significant);
    if (ec != std::errc{}) return "nan";
    return {buf.data(), end};
}

std::string format_fixed(double value, int decimals) {
    std::array<char, 512> buf{};
    auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
    if (ec != std::errc{}) return format_double(value, decimals + 1);
    return {buf.data(), end};
}

}  // namespace jgw
