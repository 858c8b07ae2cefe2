#pragma once

// Exact numeric primitives: money in stotinki, rates in basis points,
// fixed-point rate scale factors and arbitrary precision rationals.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace taxsim {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
__extension__ typedef __int128 Wide;
__extension__ typedef unsigned __int128 UWide;

/// Amount of money in stotinki (1 BGN = 100 stotinki).
struct Money {
    std::int64_t stotinki = 0;

    constexpr Money() = default;
    constexpr explicit Money(std::int64_t st) : stotinki(st) {}

    static constexpr Money bgn(std::int64_t whole) { return Money{whole * 100}; }

    constexpr auto operator<=>(const Money&) const = default;

    constexpr Money operator-() const { return Money{-stotinki}; }
    constexpr Money& operator+=(Money o) { stotinki += o.stotinki; return *this; }
    constexpr Money& operator-=(Money o) { stotinki -= o.stotinki; return *this; }
    friend constexpr Money operator+(Money a, Money b) { return a += b; }
    friend constexpr Money operator-(Money a, Money b) { return a -= b; }
    friend constexpr Money operator*(Money a, std::int64_t k) { return Money{a.stotinki * k}; }
    friend constexpr Money operator*(std::int64_t k, Money a) { return Money{a.stotinki * k}; }
};

constexpr Money bgn(std::int64_t whole) { return Money::bgn(whole); }

/// "1234.50", "-300.00". Always two fraction digits.
std::string format_money(Money m);

/// Accepts an optional leading '-', digits, and at most two fraction digits.
/// Throws InvalidInput on anything else.
Money parse_money(std::string_view text);

/// Tax rate in basis points (1 bp = 0.01 %). Range is not enforced here;
/// schedules report out-of-range rates as validation violations.
struct Rate {
    std::int32_t bp = 0;

    static constexpr std::int32_t kFull = 10000;

    constexpr Rate() = default;
    constexpr explicit Rate(std::int32_t basis_points) : bp(basis_points) {}
    static constexpr Rate percent(std::int32_t p) { return Rate{p * 100}; }

    constexpr bool valid() const { return bp >= 0 && bp <= kFull; }
    constexpr auto operator<=>(const Rate&) const = default;
};

/// "0.9900" style decimal fraction of a rate (4 fraction digits, exact).
std::string format_rate_fraction(Rate r);
/// Parses a decimal fraction with at most 4 fraction digits ("0.99", "1").
Rate parse_rate_fraction(std::string_view text);

/// Multiplier applied uniformly to bracket rates. Fixed point with 12
/// fraction digits so bisection runs over integers.
struct RateScale {
    std::int64_t units = kOne;

    static constexpr std::int64_t kOne = 1'000'000'000'000;

    static constexpr RateScale one() { return RateScale{kOne}; }
    static constexpr RateScale from_units(std::int64_t u) { return RateScale{u}; }

    double to_double() const { return static_cast<double>(units) / static_cast<double>(kOne); }
    Rational to_rational() const { return Rational(units) / kOne; }

    constexpr auto operator<=>(const RateScale&) const = default;
};

/// "1.500000000000"
std::string format_scale(RateScale s);
RateScale parse_scale(std::string_view text);

/// Product of two scales, rounded half-up to the fixed-point grid.
RateScale operator*(RateScale a, RateScale b);

/// floor((num + den/2) / den) for den > 0, i.e. round half toward +inf.
Wide round_half_up(Wide num, Wide den);

/// Converts an exactly representable 128-bit integer into a big integer.
BigInt to_big(Wide v);

/// Decimal rendering of a rational, rounded half-up at `digits` places.
std::string format_decimal(const Rational& q, int digits);

/// Parses a plain decimal ("0.01", "12", "-3.5") into an exact rational.
Rational parse_decimal(std::string_view text);

/// Nearest integer, ties toward +inf. Throws InvalidInput outside int64.
std::int64_t round_to_int(const Rational& q);

/// Rounds a rational number of stotinki half-up to Money.
Money round_money(const Rational& stotinki);

}  // namespace taxsim
