#include <doctest.h>

#include "taxsim/errors.hpp"
#include "taxsim/money.hpp"

#include <random>

using namespace taxsim;

TEST_CASE("money formats with two fraction digits") {
    CHECK(format_money(Money{0}) == "0.00");
    CHECK(format_money(Money{5}) == "0.05");
    CHECK(format_money(bgn(460)) == "460.00");
    CHECK(format_money(Money{-30000}) == "-300.00");
    CHECK(format_money(Money{-5}) == "-0.05");
    CHECK(format_money(Money{123456}) == "1234.56");
}

TEST_CASE("money parsing") {
    CHECK(parse_money("460") == bgn(460));
    CHECK(parse_money("460.5") == Money{46050});
    CHECK(parse_money("0.01") == Money{1});
    CHECK(parse_money("-300.00") == Money{-30000});
    CHECK_THROWS_AS(parse_money(""), InvalidInput);
    CHECK_THROWS_AS(parse_money("1.234"), InvalidInput);
    CHECK_THROWS_AS(parse_money("1,5"), InvalidInput);
    CHECK_THROWS_AS(parse_money("12."), InvalidInput);
    CHECK_THROWS_AS(parse_money(".5"), InvalidInput);
    CHECK_THROWS_AS(parse_money("99999999999999999999"), InvalidInput);
}

TEST_CASE("money text round-trips") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> dist(-1'000'000'000'000, 1'000'000'000'000);
    for (int i = 0; i < 500; ++i) {
        Money m{dist(rng)};
        REQUIRE(parse_money(format_money(m)) == m);
    }
}

TEST_CASE("half-up rounding goes toward +inf on ties") {
    CHECK(round_half_up(5, 10) == 1);
    CHECK(round_half_up(4, 10) == 0);
    CHECK(round_half_up(15, 10) == 2);
    CHECK(round_half_up(-5, 10) == 0);
    CHECK(round_half_up(-6, 10) == -1);
    CHECK(round_half_up(-15, 10) == -1);
}

TEST_CASE("rate fractions and scales") {
    CHECK(format_rate_fraction(Rate{9900}) == "0.9900");
    CHECK(parse_rate_fraction("0.99") == Rate{9900});
    CHECK(parse_rate_fraction("1") == Rate{10000});
    CHECK_THROWS_AS(parse_rate_fraction("0.12345"), InvalidInput);
    CHECK(format_scale(RateScale::one()) == "1.000000000000");
    CHECK(parse_scale("1.5").units == 1'500'000'000'000);
    CHECK_THROWS_AS(parse_scale("-1"), InvalidInput);
    CHECK((parse_scale("1.5") * parse_scale("2")) == parse_scale("3"));
}

TEST_CASE("decimal rendering of rationals") {
    CHECK(format_decimal(Rational(1, 2), 6) == "0.500000");
    CHECK(format_decimal(Rational(2, 3), 6) == "0.666667");
    CHECK(format_decimal(Rational(-1, 3), 2) == "-0.33");
    CHECK(format_decimal(Rational(13, 150), 4) == "0.0867");
    CHECK(parse_decimal("0.01") == Rational(1, 100));
    CHECK(parse_decimal("-2.5") == Rational(-5, 2));
    CHECK_THROWS_AS(parse_decimal("abc"), InvalidInput);
    CHECK(round_money(Rational(91080, 2)) == Money{45540});
    CHECK(to_big(-(static_cast<Wide>(1) << 100)) == -(BigInt(1) << 100));
}
