#include <doctest.h>

#include "taxsim/errors.hpp"
#include "taxsim/metrics.hpp"
#include "taxsim/policy.hpp"
#include "test_support.hpp"

#include <random>

using namespace taxsim;
using taxsim::testing::family;
using taxsim::testing::single;

namespace {

std::vector<Money> incomes(std::initializer_list<std::int64_t> bgn_values) {
    std::vector<Money> v;
    for (auto x : bgn_values) v.push_back(bgn(x));
    return v;
}

// Direct pairwise definition.
Rational pairwise_gini(const std::vector<Money>& x) {
    BigInt diff = 0;
    BigInt total = 0;
    for (auto a : x) {
        total += a.stotinki;
        for (auto b : x) diff += a > b ? a.stotinki - b.stotinki : b.stotinki - a.stotinki;
    }
    return Rational(diff, 2 * static_cast<std::int64_t>(x.size()) * total);
}

std::vector<Money> random_incomes(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(1, 40);
    std::uniform_int_distribution<std::int64_t> value(0, 5'000'000);
    std::vector<Money> v(static_cast<std::size_t>(len(rng)));
    for (auto& m : v) m = Money{value(rng)};
    v[0] += Money{1};  // keep the total positive
    return v;
}

Policy monthly_flat(Rate collection) {
    Policy p;
    p.name = "monthly_flat";
    p.schedule = Schedule::flat(Rate::percent(10));
    p.household_mode = HouseholdMode::per_member;
    p.collection_rate = collection;
    return p;
}

}  // namespace

TEST_CASE("gini goldens") {
    CHECK(gini(incomes({100, 100, 100, 100})) == 0);
    CHECK(gini(incomes({0, 100})) == Rational(1, 2));
    CHECK(gini(incomes({0, 0, 0, 100})) == Rational(3, 4));
    CHECK(gini(incomes({1, 2, 3, 4})) == pairwise_gini(incomes({1, 2, 3, 4})));
    CHECK(gini(incomes({1, 2, 3, 4})) == Rational(1, 4));
    CHECK(gini(incomes({5})) == 0);
    CHECK_THROWS_AS(gini(incomes({0, 0})), UndefinedMetric);
    CHECK_THROWS_AS(gini(std::vector<Money>{}), InvalidInput);
    CHECK_THROWS_AS(gini(std::vector<Money>{Money{-1}, bgn(1)}), InvalidInput);
}

TEST_CASE("top share goldens") {
    std::vector<Money> hundred;
    for (int i = 1; i <= 100; ++i) hundred.push_back(bgn(i == 100 ? 901 : 1));
    // 99 x 1 + 901 = 1000
    CHECK(top_share(hundred, Rational(1, 100)) == Rational(901, 1000));
    CHECK(top_share(incomes({10, 20, 30}), Rational(1)) == 1);
    CHECK(top_share(incomes({10, 90, 90}), Rational(1, 3)) == Rational(90, 190));
    // ceil(0.5 * 3) = 2 incomes
    CHECK(top_share(incomes({10, 90, 90}), Rational(1, 2)) == Rational(180, 190));
    CHECK_THROWS_AS(top_share(incomes({1}), Rational(0)), InvalidInput);
    CHECK_THROWS_AS(top_share(incomes({1}), Rational(3, 2)), InvalidInput);
    CHECK_THROWS_AS(top_share(incomes({0}), Rational(1, 2)), UndefinedMetric);
}

TEST_CASE("lorenz points") {
    auto pts = lorenz_points(incomes({30, 10}));
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].population == 0);
    CHECK(pts[0].income == 0);
    CHECK(pts[1].population == Rational(1, 2));
    CHECK(pts[1].income == Rational(1, 4));
    CHECK(pts[2].population == 1);
    CHECK(pts[2].income == 1);
}

TEST_CASE("revenue applies the collection rate once") {
    std::vector<Household> ten;
    for (int i = 0; i < 10; ++i) ten.push_back(single(bgn(460), "s" + std::to_string(i)));
    CHECK(revenue(ten, monthly_flat(Rate{Rate::kFull})) == bgn(460));
    CHECK(revenue(ten, monthly_flat(Rate{9900})) == Money{45540});
    CHECK(revenue(std::vector<Household>{}, monthly_flat(Rate{9900})) == Money{0});
    // NIT transfers count negative
    std::vector<Household> fam{family(bgn(1200), 3)};
    CHECK(revenue(fam, preset_nit_2016()) == bgn(-300));
}

TEST_CASE("winners and losers between flat and NIT") {
    std::vector<Household> fam{family(bgn(1200), 3)};
    auto w = winners_losers(fam, preset_flat_2008(), preset_nit_2016());
    CHECK(w.period == Period::monthly);
    REQUIRE(w.households.size() == 1);
    CHECK(w.households[0].tax_a == bgn(120));
    CHECK(w.households[0].tax_b == bgn(-300));
    CHECK(w.households[0].delta == bgn(-420));
    CHECK(w.winners == 1);
    CHECK(w.losers == 0);

    auto same = winners_losers(fam, preset_nit_2016(), preset_nit_2016());
    CHECK(same.unchanged == 1);
    CHECK(same.households[0].delta == Money{0});
    CHECK(winners_losers(std::vector<Household>{}, preset_flat_2008(), preset_nit_2016()).households.empty());

    auto annual = winners_losers(fam, preset_flat_2008(), preset_flat_2008());
    CHECK(annual.period == Period::annual);
    CHECK(annual.households[0].tax_a == bgn(1440));
}

TEST_CASE("evaluate report") {
    std::vector<Household> hs{family(bgn(1200), 3, "a"), single(bgn(460), "b"), single(bgn(0), "c")};
    auto r = evaluate(hs, preset_nit_2016());
    CHECK(r.households == 3);
    CHECK(r.total_income == bgn(1660));
    // -300 + (160 x 10 %) - 300
    CHECK(r.total_tax_assessed == Money{-58400});
    CHECK(r.total_revenue == r.total_tax_assessed);
    REQUIRE(r.gini_pre);
    REQUIRE(r.gini_post);
    CHECK(*r.gini_post < *r.gini_pre);
    CHECK(*r.redistribution == *r.gini_pre - *r.gini_post);
    CHECK(r.lorenz_pre.size() == 4);
    REQUIRE(r.deciles.size() == 10);
    std::size_t counted = 0;
    for (const auto& d : r.deciles) counted += d.households;
    CHECK(counted == 3);
    CHECK(r.top_shares.size() == 2);

    auto empty = evaluate(std::vector<Household>{}, preset_flat_2008());
    CHECK(empty.households == 0);
    CHECK_FALSE(empty.gini_pre);
    CHECK(empty.total_revenue == Money{0});
}

TEST_CASE("inequality metric properties") {
    std::mt19937_64 rng(1970);
    std::uniform_int_distribution<std::int64_t> factor(2, 50);
    for (int i = 0; i < 200; ++i) {
        auto x = random_incomes(rng);
        auto g = gini(x);
        CHECK(g == pairwise_gini(x));
        CHECK(g >= 0);
        CHECK(g <= 1 - Rational(1, static_cast<std::int64_t>(x.size())));

        // scale invariance
        auto k = factor(rng);
        std::vector<Money> scaled;
        for (auto m : x) scaled.push_back(m * k);
        CHECK(gini(scaled) == g);

        // replication invariance
        std::vector<Money> twice(x);
        twice.insert(twice.end(), x.begin(), x.end());
        CHECK(gini(twice) == g);

        // gini = 1 - 2 * area under the Lorenz polyline
        auto pts = lorenz_points(x);
        Rational area = 0;
        for (std::size_t j = 1; j < pts.size(); ++j)
            area += (pts[j].population - pts[j - 1].population) * (pts[j].income + pts[j - 1].income) / 2;
        CHECK(g == 1 - 2 * area);

        // convex and below the diagonal
        for (std::size_t j = 0; j < pts.size(); ++j) CHECK(pts[j].income <= pts[j].population);
        for (std::size_t j = 2; j < pts.size(); ++j)
            CHECK(pts[j].income - pts[j - 1].income >= pts[j - 1].income - pts[j - 2].income);

        // top shares grow with p, and p * total is a lower bound
        Rational prev = 0;
        for (int pct = 1; pct <= 100; pct += 9) {
            Rational p(pct, 100);
            auto s = top_share(x, p);
            CHECK(s >= prev);
            CHECK(s <= 1);
            prev = s;
        }
    }
}

TEST_CASE("revenue is linear in the collection rate") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::int64_t> income(0, 1'000'000);
    std::uniform_int_distribution<std::int32_t> rate(0, Rate::kFull);
    for (int i = 0; i < 50; ++i) {
        std::vector<Household> hs;
        for (int k = 0; k < 20; ++k) hs.push_back(single(Money{income(rng)}, "s" + std::to_string(k)));
        Money full = revenue(hs, monthly_flat(Rate{Rate::kFull}));
        Rate c{rate(rng)};
        Money expected{static_cast<std::int64_t>(round_half_up(static_cast<Wide>(full.stotinki) * c.bp, Rate::kFull))};
        CHECK(revenue(hs, monthly_flat(c)) == expected);
    }
}

TEST_CASE("reference top-1% shares") {
    auto refs = reference_top1_shares();
    REQUIRE(refs.size() == 2);
    CHECK(refs[0].year == 1970);
    CHECK(refs[0].top1_share == Rational(8, 100));
    CHECK(refs[1].top1_share == Rational(17, 100));
}
