#pragma once

// Revenue and inequality statistics over pre- and post-tax household incomes.
// All inequality measures are exact rationals.

#include "taxsim/household.hpp"
#include "taxsim/money.hpp"
#include "taxsim/policy.hpp"
#include "taxsim/population.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace taxsim {

/// Mean absolute difference over all ordered pairs divided by twice the
/// mean: sum_ij |xi - xj| / (2 n^2 mu). Throws InvalidInput on empty or
/// negative input and UndefinedMetric when the mean is zero.
Rational gini(std::span<const Money> incomes);

/// Share of total income held by the top ceil(p * n) incomes.
/// 0 < p <= 1. Throws InvalidInput on empty input or bad p, UndefinedMetric
/// when total income is zero.
Rational top_share(std::span<const Money> incomes, const Rational& p);

struct LorenzPoint {
    Rational population;
    Rational income;
};

/// Ascending-sorted cumulative shares, from (0,0) to (1,1), n + 1 points.
std::vector<LorenzPoint> lorenz_points(std::span<const Money> incomes);

/// Pre-tax household incomes in the policy's period.
std::vector<Money> household_incomes(std::span<const Household> households, Period period);

/// Collection-adjusted revenue. Household taxes are summed in ascending
/// household id order; NIT transfers count negative.
Money revenue(std::span<const Household> households, const Policy& policy);

struct HouseholdDelta {
    std::string household_id;
    Money tax_a;
    Money tax_b;
    Money delta;  // tax_b - tax_a
};

struct WinnersLosers {
    std::string policy_a;
    std::string policy_b;
    /// Same period for both policies, else monthly (annual amounts / 12).
    Period period = Period::monthly;
    std::vector<HouseholdDelta> households;
    std::size_t winners = 0;  // delta < 0
    std::size_t losers = 0;   // delta > 0
    std::size_t unchanged = 0;
};

WinnersLosers winners_losers(std::span<const Household> households, const Policy& a, const Policy& b);

struct DecileRate {
    int decile = 0;  // 1..10, ascending pre-tax income
    std::size_t households = 0;
    Money income;
    Money tax;
    std::optional<Rational> effective_rate;  // tax / income, unset on zero income
};

struct TopShare {
    Rational p;
    std::optional<Rational> pre;
    std::optional<Rational> post;
};

struct MetricsReport {
    std::string policy_name;
    Period period = Period::monthly;
    std::size_t households = 0;
    Money total_income;
    Money total_tax_assessed;
    Money total_revenue;
    Rate collection_rate;
    // Unset when the metric is undefined (zero mean, negative incomes).
    std::optional<Rational> gini_pre;
    std::optional<Rational> gini_post;
    std::optional<Rational> redistribution;
    std::vector<LorenzPoint> lorenz_pre;
    std::vector<LorenzPoint> lorenz_post;
    std::vector<TopShare> top_shares;
    std::vector<DecileRate> deciles;
};

/// Top-share cut-offs reported by evaluate().
std::vector<Rational> default_top_share_points();

MetricsReport evaluate(std::span<const Household> households, const Policy& policy);

/// Quoted top-1% income shares, shipped for labeling charts. They are not
/// reproduced by the engine (no micro-data behind them).
struct ReferenceShare {
    std::string country;
    int year;
    Rational top1_share;
};
std::vector<ReferenceShare> reference_top1_shares();

}  // namespace taxsim
