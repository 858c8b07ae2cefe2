#pragma once

// Policy experiments: revenue-neutral rate scaling, side-by-side comparison
// and parameter sweeps.

#include "taxsim/metrics.hpp"
#include "taxsim/policy.hpp"
#include "taxsim/population.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taxsim {

struct SolveResult {
    RateScale scale;  // relative to the input policy
    Money revenue;    // at `scale`
    int iterations = 0;
    RateScale bracket_low;  // final bisection interval
    RateScale bracket_high;
};

inline constexpr int kMaxSolverIterations = 64;

/// Finds s in [0, s_max] with |revenue(scale_policy(p, s)) - target| <= tolerance
/// by bisection over the fixed-point scale grid. s_max is the largest scale
/// keeping every bracket rate at or below 100 %.
///
/// Throws UnreachableTarget when the target lies outside
/// [revenue(0), revenue(s_max)] by more than the tolerance, and SolverError
/// when revenue is observed to decrease in s or no grid point lands within
/// the tolerance.
SolveResult revenue_neutral_scale(const Policy& policy, std::span<const Household> households, Money target,
                                  Money tolerance);

struct ComparisonReport {
    std::vector<MetricsReport> reports;
    /// Policy i (i >= 1) against policy 0.
    std::vector<WinnersLosers> versus_baseline;
};

ComparisonReport compare(std::span<const Household> households, std::span<const Policy> policies);

struct SweepPoint {
    std::string value;
    MetricsReport report;
};

/// Supported parameter paths:
///   collection_rate                    fraction, e.g. "0.99"
///   rate_scale                         absolute scale, e.g. "1.25"
///   nit.social_minimum_bgn             money
///   nit.transfer_slope_bp              integer
///   schedule.brackets[i].rate_bp       integer
///   schedule.brackets[i].lower_bgn     money
///   population_scale                   factor applied via resample()
///   population_year                    demographic preset year, scaled
///                                      relative to the 2015 count
std::vector<SweepPoint> sweep(std::span<const Household> households, const Policy& policy, std::string_view path,
                              std::span<const std::string> values);

}  // namespace taxsim
