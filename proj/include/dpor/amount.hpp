#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dpor {

/// Token quantity in fixed point with six decimal places.
///
/// Sums over a round are exact; conversion to floating point happens once,
/// when the transfer graph is built.
class TokenAmount {
public:
    static constexpr std::int64_t kScale = 1'000'000;

    constexpr TokenAmount() = default;

    static constexpr TokenAmount from_micros(std::int64_t micros) { return TokenAmount(micros); }
    static constexpr TokenAmount from_tokens(std::int64_t tokens) { return TokenAmount(tokens * kScale); }

    /// Accepts `[-]digits[.digits]` with at most six fractional digits.
    static std::optional<TokenAmount> parse(std::string_view text);

    constexpr std::int64_t micros() const { return micros_; }
    constexpr double to_double() const { return static_cast<double>(micros_) / kScale; }
    constexpr bool is_zero() const { return micros_ == 0; }
    constexpr bool is_negative() const { return micros_ < 0; }

    /// Shortest decimal form that parses back to the same value ("12.5", "100").
    std::string to_string() const;

    constexpr TokenAmount& operator+=(TokenAmount other) {
        micros_ += other.micros_;
        return *this;
    }
    friend constexpr TokenAmount operator+(TokenAmount a, TokenAmount b) { return a += b; }
    friend constexpr TokenAmount operator*(TokenAmount a, std::int64_t k) { return TokenAmount(a.micros_ * k); }
    friend constexpr auto operator<=>(TokenAmount, TokenAmount) = default;

private:
    constexpr explicit TokenAmount(std::int64_t micros) : micros_(micros) {}
    std::int64_t micros_ = 0;
};

}  // namespace dpor
