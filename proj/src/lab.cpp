#include "taxsim/lab.hpp"

#include "taxsim/errors.hpp"

#include <charconv>
#include <variant>

namespace taxsim {

SolveResult revenue_neutral_scale(const Policy& policy, std::span<const Household> households, Money target,
                                  Money tolerance) {
    require_valid(policy);
    if (tolerance < Money{0}) throw InvalidInput("negative solver tolerance");

    auto rev = [&](RateScale s) { return revenue(households, scale_policy(policy, s)); };
    auto within = [&](Money r) {
        Money diff = r - target;
        return (diff < Money{0} ? -diff : diff) <= tolerance;
    };

    auto upper = max_scale(policy);
    if (!upper) {
        // Scaling cannot change revenue.
        Money r = rev(RateScale::one());
        if (!within(r))
            throw UnreachableTarget("target " + format_money(target) + " unreachable: revenue is fixed at " +
                                    format_money(r));
        return {RateScale::one(), r, 0, RateScale::one(), RateScale::one()};
    }

    Wide income = 0;
    for (const auto& m : household_incomes(households, policy.schedule.period)) income += m.stotinki;
    if (income < 1) income = 1;
    // Stop once the bracket is narrower than tolerance / total income.
    Wide min_width = static_cast<Wide>(tolerance.stotinki) * RateScale::kOne / income;

    std::int64_t lo = 0;
    std::int64_t hi = upper->units;
    Money r_lo = rev(RateScale::from_units(lo));
    Money r_hi = rev(RateScale::from_units(hi));
    if (r_lo > r_hi) throw SolverError("revenue decreases with the rate scale for policy '" + policy.name + "'");
    if (target > r_hi + tolerance)
        throw UnreachableTarget("target " + format_money(target) + " above the maximum reachable revenue " +
                                format_money(r_hi));
    if (target < r_lo - tolerance)
        throw UnreachableTarget("target " + format_money(target) + " below the revenue at zero rates " +
                                format_money(r_lo));
    if (within(r_lo)) return {RateScale::from_units(lo), r_lo, 0, RateScale::from_units(lo), RateScale::from_units(hi)};
    if (within(r_hi)) return {RateScale::from_units(hi), r_hi, 0, RateScale::from_units(lo), RateScale::from_units(hi)};

    int it = 0;
    while (it < kMaxSolverIterations && hi - lo > 1 && static_cast<Wide>(hi - lo) >= min_width) {
        ++it;
        std::int64_t mid = lo + (hi - lo) / 2;
        Money r_mid = rev(RateScale::from_units(mid));
        if (r_mid < r_lo || r_mid > r_hi)
            throw SolverError("revenue is not monotone in the rate scale for policy '" + policy.name + "'");
        if (within(r_mid))
            return {RateScale::from_units(mid), r_mid, it, RateScale::from_units(lo), RateScale::from_units(hi)};
        if (r_mid < target) {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
            r_hi = r_mid;
        }
    }
    bool low_closer = (target - r_lo) <= (r_hi - target);
    Money best = low_closer ? r_lo : r_hi;
    if (!within(best))
        throw SolverError("no rate scale within tolerance " + format_money(tolerance) +
                          ": revenue steps from " + format_money(r_lo) + " to " + format_money(r_hi));
    return {RateScale::from_units(low_closer ? lo : hi), best, it, RateScale::from_units(lo),
            RateScale::from_units(hi)};
}

ComparisonReport compare(std::span<const Household> households, std::span<const Policy> policies) {
    if (policies.empty()) throw InvalidInput("compare needs at least one policy");
    ComparisonReport out;
    for (const auto& p : policies) out.reports.push_back(evaluate(households, p));
    for (std::size_t i = 1; i < policies.size(); ++i)
        out.versus_baseline.push_back(winners_losers(households, policies[0], policies[i]));
    return out;
}

namespace {

struct CollectionRate {};
struct AbsoluteScale {};
struct SocialMinimum {};
struct TransferSlope {};
struct BracketRate {
    std::size_t index;
};
struct BracketLower {
    std::size_t index;
};
struct PopulationScale {};
struct PopulationYear {};

using Target = std::variant<CollectionRate, AbsoluteScale, SocialMinimum, TransferSlope, BracketRate, BracketLower,
                            PopulationScale, PopulationYear>;

std::int64_t parse_int(std::string_view s, std::string_view what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidInput("invalid " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

Target parse_path(std::string_view path, const Policy& policy) {
    if (path == "collection_rate") return CollectionRate{};
    if (path == "rate_scale") return AbsoluteScale{};
    if (path == "population_scale") return PopulationScale{};
    if (path == "population_year") return PopulationYear{};
    if (path == "nit.social_minimum_bgn" || path == "nit.transfer_slope_bp") {
        if (!policy.nit) throw InvalidInput("policy '" + policy.name + "' has no nit parameters");
        if (path == "nit.social_minimum_bgn") return SocialMinimum{};
        return TransferSlope{};
    }
    constexpr std::string_view prefix = "schedule.brackets[";
    if (path.starts_with(prefix)) {
        auto close = path.find(']', prefix.size());
        if (close != std::string_view::npos) {
            auto idx = parse_int(path.substr(prefix.size(), close - prefix.size()), "bracket index");
            if (idx < 0 || static_cast<std::size_t>(idx) >= policy.schedule.brackets.size())
                throw InvalidInput("bracket index out of range in '" + std::string(path) + "'");
            auto field = path.substr(close + 1);
            auto i = static_cast<std::size_t>(idx);
            if (field == ".rate_bp") return BracketRate{i};
            if (field == ".lower_bgn") return BracketLower{i};
        }
    }
    throw InvalidInput("unknown parameter path '" + std::string(path) + "'");
}

struct Applied {
    Policy policy;
    std::optional<Population> population;
};

Applied apply(const Target& target, const Policy& base, std::span<const Household> households,
              const std::string& value) {
    Applied a{base, std::nullopt};
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, CollectionRate>) {
                a.policy.collection_rate = parse_rate_fraction(value);
            } else if constexpr (std::is_same_v<T, AbsoluteScale>) {
                a.policy.rate_scale = parse_scale(value);
            } else if constexpr (std::is_same_v<T, SocialMinimum>) {
                a.policy.nit->social_minimum_per_capita = parse_money(value);
            } else if constexpr (std::is_same_v<T, TransferSlope>) {
                a.policy.nit->transfer_slope = Rate{static_cast<std::int32_t>(parse_int(value, "transfer slope"))};
            } else if constexpr (std::is_same_v<T, BracketRate>) {
                a.policy.schedule.brackets[t.index].rate = Rate{static_cast<std::int32_t>(parse_int(value, "rate"))};
            } else if constexpr (std::is_same_v<T, BracketLower>) {
                a.policy.schedule.brackets[t.index].lower = parse_money(value);
            } else if constexpr (std::is_same_v<T, PopulationScale>) {
                Population p(households.begin(), households.end());
                a.population = resample(p, parse_decimal(value));
            } else if constexpr (std::is_same_v<T, PopulationYear>) {
                auto year = static_cast<int>(parse_int(value, "year"));
                auto preset = find_demographic_preset(year);
                if (!preset) throw InvalidInput("no demographic preset for year " + value);
                auto baseline = find_demographic_preset(2015);
                Population p(households.begin(), households.end());
                a.population = resample(p, Rational(preset->population_count, baseline->population_count));
            }
        },
        target);
    require_valid(a.policy);
    return a;
}

}  // namespace

std::vector<SweepPoint> sweep(std::span<const Household> households, const Policy& policy, std::string_view path,
                              std::span<const std::string> values) {
    require_valid(policy);
    const Target target = parse_path(path, policy);
    std::vector<SweepPoint> out;
    out.reserve(values.size());
    for (const auto& v : values) {
        Applied a = apply(target, policy, households, v);
        std::span<const Household> hs = a.population ? std::span<const Household>(*a.population) : households;
        out.push_back({v, evaluate(hs, a.policy)});
    }
    return out;
}

}  // namespace taxsim
