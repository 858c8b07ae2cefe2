#pragma once

// 2+N households and the household-level tax regimes: negative income tax
// against a per-capita social minimum, and per-member progressive scales.

#include "taxsim/money.hpp"
#include "taxsim/relief.hpp"
#include "taxsim/schedule.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taxsim {

struct Policy;

enum class Role { adult, child };
std::string_view to_string(Role r);
Role parse_role(std::string_view s);

struct Member {
    std::string id;
    Role role = Role::adult;
    Money monthly_income;
    ReliefClaims claims;

    bool operator==(const Member&) const = default;
};

struct Household {
    std::string id;
    std::vector<Member> members;

    Money monthly_income() const;
    std::size_t adults() const;
    std::size_t children() const;

    bool operator==(const Household&) const = default;
};

std::vector<std::string> validate_household(const Household& h);
void require_valid(const Household& h);

struct NitParams {
    Money social_minimum_per_capita = bgn(300);
    Schedule schedule = Schedule::flat(Rate::percent(10));  // on income above the minimum
    /// Transfer per unit of shortfall below the minimum; 100 % closes the gap.
    Rate transfer_slope{Rate::kFull};
};

Money household_minimum(const Household& h, const NitParams& params);

/// Monthly. Negative below the household minimum (a transfer), otherwise the
/// schedule applied to income in excess of the minimum.
Money nit_tax(const Household& h, const NitParams& params, RateScale scale = RateScale::one());

/// Sum of the monthly schedule applied to each member's own income.
Money per_member_tax(const Household& h, const Schedule& schedule, RateScale scale = RateScale::one());

/// Household tax under `policy`, in the policy schedule's period.
/// Collection efficiency is not applied here.
Money household_tax(const Household& h, const Policy& policy);

/// Annual amounts are divided by 12, rounded half-up.
Money monthly_equivalent(Money amount, Period period);

/// Itemized tax for one household, as returned by the what-if endpoint.
struct MemberBreakdown {
    std::string member_id;
    Money income;  // in the policy period
    std::optional<ReliefResult> reliefs;
    Money taxable_base;
    std::vector<BracketSlice> brackets;
    Money tax;
};

struct NitBreakdown {
    Money minimum;
    Money income;
    Money transfer;        // >= 0, paid to the household
    Money taxable_excess;  // income above the minimum
    std::optional<ReliefResult> reliefs;
    std::vector<BracketSlice> brackets;
    Money tax;
};

struct HouseholdBreakdown {
    std::string household_id;
    Period period = Period::monthly;
    Money income;
    std::vector<MemberBreakdown> members;
    std::optional<NitBreakdown> nit;
    Money tax;
};

HouseholdBreakdown household_breakdown(const Household& h, const Policy& policy);

}  // namespace taxsim
