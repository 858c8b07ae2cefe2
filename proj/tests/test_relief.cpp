#include <doctest.h>

#include "taxsim/errors.hpp"
#include "taxsim/relief.hpp"

#include <functional>
#include <random>

using namespace taxsim;

namespace {

const ReliefRules kRules{};

ReliefClaims kids(int n) {
    ReliefClaims c;
    c.children = n;
    return c;
}

ReliefClaims random_claims(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> money(0, 3'000'000);
    std::uniform_int_distribution<int> count(0, 5);
    std::uniform_int_distribution<int> pct(0, 100);
    ReliefClaims c;
    c.voluntary_pension_paid = Money{money(rng)};
    c.insurance_paid = Money{money(rng)};
    c.service_purchase_paid = Money{money(rng) / 10};
    c.donations = Money{money(rng)};
    c.mortgage_interest_paid = Money{money(rng)};
    c.mortgage_principal = Money{money(rng) * 10};
    c.children = count(rng);
    c.disabled_children = std::uniform_int_distribution<int>(0, c.children)(rng);
    c.reduced_capacity_pct = pct(rng);
    c.young_family_eligible = rng() % 2 == 0;
    return c;
}

}  // namespace

TEST_CASE("2016 relief goldens") {
    CHECK(apply_reliefs(bgn(12000), kids(2), kRules).taxable_base == bgn(11600));
    CHECK(apply_reliefs(bgn(12000), kids(1), kRules).taxable_base == bgn(11800));
    CHECK(apply_reliefs(bgn(12000), kids(4), kRules).taxable_base == bgn(11400));

    ReliefClaims reduced;
    reduced.reduced_capacity_pct = 60;
    auto r = apply_reliefs(bgn(12000), reduced, kRules);
    CHECK(r.taxable_base == bgn(4080));
    CHECK(r.deductions.reduced_capacity == bgn(7920));
    reduced.reduced_capacity_pct = 49;
    CHECK(apply_reliefs(bgn(12000), reduced, kRules).deductions.reduced_capacity == Money{0});

    ReliefClaims pension;
    pension.voluntary_pension_paid = bgn(2000);
    r = apply_reliefs(bgn(12000), pension, kRules);
    CHECK(r.deductions.voluntary_pension == bgn(1200));
    CHECK(r.taxable_base == bgn(10800));

    ReliefClaims floor;
    floor.reduced_capacity_pct = 50;
    CHECK(apply_reliefs(bgn(1000), floor, kRules).taxable_base == Money{0});
}

TEST_CASE("donations are capped at 5 percent of the base") {
    ReliefClaims c;
    c.donations = bgn(5000);
    CHECK(apply_reliefs(bgn(12000), c, kRules).deductions.donations == bgn(600));
    c.donations = bgn(100);
    CHECK(apply_reliefs(bgn(12000), c, kRules).deductions.donations == bgn(100));
}

TEST_CASE("insurance cap is independent of the pension cap") {
    ReliefClaims c;
    c.voluntary_pension_paid = bgn(5000);
    c.insurance_paid = bgn(5000);
    auto d = apply_reliefs(bgn(10000), c, kRules).deductions;
    CHECK(d.voluntary_pension == bgn(1000));
    CHECK(d.insurance == bgn(1000));
}

TEST_CASE("disabled children get their own relief and leave the count scale") {
    ReliefClaims c;
    c.children = 3;
    c.disabled_children = 1;
    auto d = apply_reliefs(bgn(20000), c, kRules).deductions;
    CHECK(d.children == bgn(400));
    CHECK(d.disabled_children == bgn(2000));
    c.disabled_children = 3;
    d = apply_reliefs(bgn(20000), c, kRules).deductions;
    CHECK(d.children == Money{0});
    CHECK(d.disabled_children == bgn(6000));
}

TEST_CASE("service purchase is uncapped") {
    ReliefClaims c;
    c.service_purchase_paid = bgn(5000);
    auto r = apply_reliefs(bgn(1000), c, kRules);
    CHECK(r.deductions.service_purchase == bgn(5000));
    CHECK(r.taxable_base == Money{0});
}

TEST_CASE("mortgage interest is prorated above the principal cap") {
    ReliefClaims c;
    c.young_family_eligible = true;
    c.mortgage_interest_paid = bgn(5000);
    c.mortgage_principal = bgn(100000);
    auto full = apply_reliefs(bgn(50000), c, kRules).deductions.mortgage_interest;
    CHECK(full == bgn(5000));
    c.mortgage_principal = bgn(200000);
    auto half = apply_reliefs(bgn(50000), c, kRules).deductions.mortgage_interest;
    CHECK(half * 2 == full);
    c.young_family_eligible = false;
    CHECK(apply_reliefs(bgn(50000), c, kRules).deductions.mortgage_interest == Money{0});
}

TEST_CASE("annual_tax") {
    auto flat = Schedule::flat(Rate::percent(10), Period::annual);
    CHECK(annual_tax(bgn(460) * 12, ReliefClaims{}, kRules, flat) == bgn(552));
    CHECK(annual_tax(bgn(12000), kids(2), kRules, flat) == bgn(1160));
    CHECK(annual_tax(Money{0}, kids(3), kRules, flat) == Money{0});
    CHECK_THROWS_AS(annual_tax(bgn(100), ReliefClaims{}, kRules, Schedule::flat(Rate::percent(10))), InvalidInput);
}

TEST_CASE("invalid claims and rules are rejected") {
    ReliefClaims c;
    c.children = 1;
    c.disabled_children = 2;
    CHECK_THROWS_AS(apply_reliefs(bgn(100), c, kRules), InvalidInput);
    ReliefClaims neg;
    neg.donations = Money{-1};
    CHECK_THROWS_AS(apply_reliefs(bgn(100), neg, kRules), InvalidInput);
    CHECK_THROWS_AS(apply_reliefs(Money{-1}, ReliefClaims{}, kRules), InvalidInput);
    ReliefRules bad;
    bad.child_relief = {bgn(400), bgn(200), bgn(600)};
    CHECK_FALSE(validate_rules(bad).empty());
    CHECK_THROWS_AS(apply_reliefs(bgn(100), ReliefClaims{}, bad), InvalidInput);
}

TEST_CASE("relief invariants over random claims") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::int64_t> base_dist(0, 20'000'000);
    for (int i = 0; i < 500; ++i) {
        Money base{base_dist(rng)};
        CHECK(apply_reliefs(base, ReliefClaims{}, kRules).taxable_base == base);

        auto c = random_claims(rng);
        auto r = apply_reliefs(base, c, kRules);
        CHECK(r.taxable_base <= base);
        CHECK(r.taxable_base >= Money{0});
        auto cap = [&](Rate rate) { return Money{static_cast<std::int64_t>(static_cast<Wide>(rate.bp) * base.stotinki / Rate::kFull)}; };
        CHECK(r.deductions.voluntary_pension <= cap(kRules.voluntary_pension_cap));
        CHECK(r.deductions.insurance <= cap(kRules.insurance_cap));
        CHECK(r.deductions.donations <= cap(kRules.donation_cap));

        // Raising any claim (other than the mortgage principal, which
        // prorates the interest relief down) never raises the taxable base.
        std::vector<std::function<void(ReliefClaims&)>> bumps{
            [](ReliefClaims& x) { x.voluntary_pension_paid += bgn(100); },
            [](ReliefClaims& x) { x.insurance_paid += bgn(100); },
            [](ReliefClaims& x) { x.service_purchase_paid += bgn(100); },
            [](ReliefClaims& x) { x.donations += bgn(100); },
            [](ReliefClaims& x) { x.mortgage_interest_paid += bgn(100); },
            [](ReliefClaims& x) { x.children += 1; },
            [](ReliefClaims& x) {
                if (x.disabled_children < x.children) x.disabled_children += 1;
            },
            [](ReliefClaims& x) { x.reduced_capacity_pct = std::min(100, x.reduced_capacity_pct + 10); },
            [](ReliefClaims& x) { x.young_family_eligible = true; },
        };
        for (const auto& bump : bumps) {
            auto more = c;
            bump(more);
            CHECK(apply_reliefs(base, more, kRules).taxable_base <= r.taxable_base);
        }
    }
}
