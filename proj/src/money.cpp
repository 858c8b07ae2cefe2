#include "taxsim/money.hpp"

#include "taxsim/errors.hpp"

#include <cstdlib>
#include <limits>

namespace taxsim {

namespace {

// Parses [-]digits[.digits] with at most `max_frac` fraction digits into an
// integer scaled by 10^max_frac.
std::int64_t parse_fixed(std::string_view text, int max_frac, std::string_view what) {
    auto fail = [&] {
        return InvalidInput("invalid " + std::string(what) + " '" + std::string(text) + "'");
    };
    if (text.empty()) throw fail();
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-') {
        negative = true;
        ++i;
    }
    constexpr auto kMax = std::numeric_limits<std::int64_t>::max() / 10;
    std::int64_t value = 0;
    int int_digits = 0;
    for (; i < text.size() && text[i] != '.'; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') throw fail();
        if (value > kMax) throw fail();
        value = value * 10 + (c - '0');
        ++int_digits;
    }
    if (int_digits == 0) throw fail();
    int frac_digits = 0;
    if (i < text.size()) {
        ++i;  // '.'
        if (i == text.size()) throw fail();
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c < '0' || c > '9') throw fail();
            if (++frac_digits > max_frac) throw fail();
            if (value > kMax) throw fail();
            value = value * 10 + (c - '0');
        }
    }
    for (; frac_digits < max_frac; ++frac_digits) {
        if (value > kMax) throw fail();
        value *= 10;
    }
    return negative ? -value : value;
}

std::string format_fixed(std::int64_t value, int frac) {
    bool negative = value < 0;
    // Work in unsigned space so INT64_MIN renders.
    auto mag = negative ? static_cast<std::uint64_t>(-(value + 1)) + 1 : static_cast<std::uint64_t>(value);
    std::string digits = std::to_string(mag);
    if (static_cast<int>(digits.size()) <= frac) digits.insert(0, frac + 1 - digits.size(), '0');
    std::string out = negative ? "-" : "";
    out += digits.substr(0, digits.size() - frac);
    if (frac > 0) {
        out += '.';
        out += digits.substr(digits.size() - frac);
    }
    return out;
}

}  // namespace

std::string format_money(Money m) { return format_fixed(m.stotinki, 2); }

Money parse_money(std::string_view text) { return Money{parse_fixed(text, 2, "money amount")}; }

std::string format_rate_fraction(Rate r) { return format_fixed(r.bp, 4); }

Rate parse_rate_fraction(std::string_view text) {
    auto v = parse_fixed(text, 4, "rate");
    if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max())
        throw InvalidInput("rate out of range '" + std::string(text) + "'");
    return Rate{static_cast<std::int32_t>(v)};
}

std::string format_scale(RateScale s) { return format_fixed(s.units, 12); }

RateScale parse_scale(std::string_view text) {
    auto v = parse_fixed(text, 12, "scale factor");
    if (v < 0) throw InvalidInput("scale factor must be non-negative");
    return RateScale::from_units(v);
}

RateScale operator*(RateScale a, RateScale b) {
    Wide prod = static_cast<Wide>(a.units) * b.units;
    Wide r = round_half_up(prod, RateScale::kOne);
    if (r > std::numeric_limits<std::int64_t>::max()) throw InvalidInput("scale factor overflow");
    return RateScale::from_units(static_cast<std::int64_t>(r));
}

Wide round_half_up(Wide num, Wide den) {
    Wide n = 2 * num + den;
    Wide d = 2 * den;
    Wide q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
}

BigInt to_big(Wide v) {
    bool negative = v < 0;
    auto mag = negative ? static_cast<UWide>(-(v + 1)) + 1 : static_cast<UWide>(v);
    BigInt hi = static_cast<std::uint64_t>(mag >> 64);
    BigInt lo = static_cast<std::uint64_t>(mag);
    BigInt out = (hi << 64) + lo;
    return negative ? BigInt(-out) : out;
}

std::string format_decimal(const Rational& q, int digits) {
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Rational scaled = q * scale;
    BigInt num = boost::multiprecision::numerator(scaled);
    BigInt den = boost::multiprecision::denominator(scaled);
    // floor((2num + den) / 2den)
    BigInt n = 2 * num + den;
    BigInt d = 2 * den;
    BigInt v = n / d;
    if (n % d != 0 && n < 0) --v;
    bool negative = v < 0;
    if (negative) v = -v;
    std::string s = v.str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
    std::string out = negative ? "-" : "";
    out += s.substr(0, s.size() - digits);
    if (digits > 0) {
        out += '.';
        out += s.substr(s.size() - digits);
    }
    return out;
}

Rational parse_decimal(std::string_view text) {
    auto fail = [&] { return InvalidInput("invalid decimal '" + std::string(text) + "'"); };
    if (text.empty()) throw fail();
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '-') {
        negative = true;
        ++i;
    }
    BigInt num = 0;
    BigInt den = 1;
    bool seen_dot = false;
    int digits = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' && !seen_dot) {
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw fail();
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
        ++digits;
    }
    if (digits == 0 || text.back() == '.') throw fail();
    Rational q(num, den);
    return negative ? Rational(-q) : q;
}

std::int64_t round_to_int(const Rational& q) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    BigInt n = 2 * num + den;
    BigInt d = 2 * den;
    BigInt v = n / d;
    if (n % d != 0 && n < 0) --v;
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw InvalidInput("value out of 64-bit range");
    return v.convert_to<std::int64_t>();
}

Money round_money(const Rational& stotinki) { return Money{round_to_int(stotinki)}; }

}  // namespace taxsim
