#include "dpor/amount.hpp"

#include <charconv>
#include <limits>

namespace dpor {

std::optional<TokenAmount> TokenAmount::parse(std::string_view text) {
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || (dot != std::string_view::npos && frac.empty()) || frac.size() > 6) return std::nullopt;
    for (char c : whole)
        if (c < '0' || c > '9') return std::nullopt;
    for (char c : frac)
        if (c < '0' || c > '9') return std::nullopt;

    std::int64_t tokens = 0;
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), tokens);
    if (ec != std::errc{} || ptr != whole.data() + whole.size()) return std::nullopt;
    if (tokens > std::numeric_limits<std::int64_t>::max() / kScale - 1) return std::nullopt;

    std::int64_t fraction = 0;
    for (std::size_t i = 0; i < 6; ++i) fraction = fraction * 10 + (i < frac.size() ? frac[i] - '0' : 0);

    const std::int64_t micros = tokens * kScale + fraction;
    return TokenAmount(negative ? -micros : micros);
}

std::string TokenAmount::to_string() const {
    const bool negative = micros_ < 0;
    const std::uint64_t magnitude = negative ? 0 - static_cast<std::uint64_t>(micros_) : static_cast<std::uint64_t>(micros_);
    std::string out = negative ? "-" : "";
    out += std::to_string(magnitude / kScale);
    std::uint64_t frac = magnitude % kScale;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 6 - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

}  // namespace dpor
