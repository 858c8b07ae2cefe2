#pragma once

#include "taxsim/money.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taxsim {

/// marginal: each band's slice taxed at its own rate.
/// slab: the whole base taxed at the rate of the band containing it.
enum class ApplicationMode { marginal, slab };
enum class Period { monthly, annual };

std::string_view to_string(ApplicationMode m);
std::string_view to_string(Period p);
ApplicationMode parse_mode(std::string_view s);
Period parse_period(std::string_view s);

/// Band starting at `lower` (inclusive) and running to the next bracket.
struct Bracket {
    Money lower;
    Rate rate;

    bool operator==(const Bracket&) const = default;
};

struct Schedule {
    std::vector<Bracket> brackets;
    ApplicationMode mode = ApplicationMode::marginal;
    Period period = Period::monthly;

    bool operator==(const Schedule&) const = default;

    static Schedule flat(Rate r, Period period = Period::monthly);
};

enum class ScheduleClass { progressive, proportional, regressive, mixed };
std::string_view to_string(ScheduleClass c);

/// Every invariant violation, in bracket order. Empty means valid.
std::vector<std::string> validate_schedule(const Schedule& s);

/// Throws InvalidInput listing the violations, if any.
void require_valid(const Schedule& s);

/// Tax before rounding, in units of 1/kTaxDenominator stotinka.
inline constexpr Wide kTaxDenominator = static_cast<Wide>(Rate::kFull) * RateScale::kOne;

/// Effective rate of a bracket after scaling, in units of 1/kTaxDenominator,
/// clamped at 100 %.
Wide scaled_rate(Rate r, RateScale scale);

Wide exact_tax(const Schedule& s, Money base, RateScale scale = RateScale::one());

/// Tax on `base` (expressed in the schedule's period), rounded half-up once
/// to the stotinka. compute_tax(s, 0) == 0.
Money compute_tax(const Schedule& s, Money base, RateScale scale = RateScale::one());

/// Unrounded tax divided by base. Throws UndefinedMetric when base == 0.
Rational average_rate(const Schedule& s, Money base);

/// Rate of the bracket containing base; lower bounds are inclusive.
Rate marginal_rate(const Schedule& s, Money base);

ScheduleClass classify(const Schedule& s, std::span<const Money> grid);

/// Slice of a base falling into one bracket, for itemized breakdowns.
struct BracketSlice {
    Money lower;
    std::optional<Money> upper;  // exclusive; nullopt for the open top band
    Rate rate;
    Money portion;  // part of the base taxed at this bracket's rate
    Rational tax;   // unrounded, stotinki
};

/// Per-bracket decomposition. Marginal mode yields one slice per bracket the
/// base reaches; slab mode yields the single containing bracket.
std::vector<BracketSlice> bracket_breakdown(const Schedule& s, Money base,
                                            RateScale scale = RateScale::one());

/// Copy with bounds multiplied by 12 and period set to annual.
Schedule annualized(const Schedule& s);

}  // namespace taxsim
