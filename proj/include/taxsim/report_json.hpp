#pragma once

// Stable JSON records shared by the CLI (json-lines output) and the HTTP API.
// Money renders as BGN strings with two fraction digits; rationals as
// decimal strings with six fraction digits.

#include "taxsim/household.hpp"
#include "taxsim/lab.hpp"
#include "taxsim/metrics.hpp"
#include "taxsim/population.hpp"

#include <json.hpp>

#include <cstddef>

namespace taxsim {

inline constexpr int kRatioDigits = 6;
inline constexpr std::size_t kDefaultLorenzPoints = 101;

/// Lorenz polylines longer than `max_lorenz_points` are thinned to the
/// vertices at population indices floor(k * n / (max - 1)).
nlohmann::ordered_json report_to_json(const MetricsReport& r, std::size_t max_lorenz_points = kDefaultLorenzPoints);
nlohmann::ordered_json winners_losers_to_json(const WinnersLosers& w);
nlohmann::ordered_json comparison_to_json(const ComparisonReport& c);
nlohmann::ordered_json sweep_to_json(const std::vector<SweepPoint>& points);
nlohmann::ordered_json solve_to_json(const SolveResult& s);
/// solve_to_json prefixed with the policy name, target and tolerance.
nlohmann::ordered_json solve_to_json(const std::string& policy, Money target, Money tolerance, const SolveResult& s);
nlohmann::ordered_json breakdown_to_json(const HouseholdBreakdown& b);

std::vector<LorenzPoint> thin_lorenz(const std::vector<LorenzPoint>& pts, std::size_t max_points);

/// Full-resolution pre- and post-tax Lorenz curves as CSV rows
/// "population_share,pre_tax_share,post_tax_share". Both curves share the
/// population grid; an undefined curve leaves its column empty.
std::string lorenz_to_csv(const MetricsReport& r);

nlohmann::ordered_json claims_to_json(const ReliefClaims& c);
ReliefClaims claims_from_json(const nlohmann::json& j);
nlohmann::ordered_json household_to_json(const Household& h);
Household household_from_json(const nlohmann::json& j);
SynthesisParams synthesis_from_json(const nlohmann::json& j);

}  // namespace taxsim
