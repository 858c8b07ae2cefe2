#pragma once

// Statutory reliefs on the annual personal income tax base (2016 rules).

#include "taxsim/money.hpp"
#include "taxsim/schedule.hpp"

#include <array>
#include <string>
#include <vector>

namespace taxsim {

struct ReliefRules {
    Rate voluntary_pension_cap = Rate::percent(10);  // of the annual base
    Rate insurance_cap = Rate::percent(10);          // of the annual base
    Rate donation_cap = Rate::percent(5);            // of the annual base
    Money mortgage_principal_cap = bgn(100'000);
    /// Relief for 1, 2 and 3+ (non-disabled) children.
    std::array<Money, 3> child_relief{bgn(200), bgn(400), bgn(600)};
    Money disabled_child_relief = bgn(2'000);  // per child
    Money reduced_capacity_relief = bgn(7'920);
    int reduced_capacity_threshold_pct = 50;

    bool operator==(const ReliefRules&) const = default;
};

std::vector<std::string> validate_rules(const ReliefRules& r);

struct ReliefClaims {
    Money voluntary_pension_paid;
    Money insurance_paid;
    Money service_purchase_paid;
    Money donations;
    Money mortgage_interest_paid;
    Money mortgage_principal;
    int children = 0;
    int disabled_children = 0;  // subset of `children`
    int reduced_capacity_pct = 0;
    bool young_family_eligible = false;

    bool operator==(const ReliefClaims&) const = default;
};

std::vector<std::string> validate_claims(const ReliefClaims& c);

struct ReliefItems {
    Money voluntary_pension;
    Money insurance;
    Money service_purchase;
    Money donations;
    Money mortgage_interest;
    Money children;
    Money disabled_children;
    Money reduced_capacity;

    Money total() const {
        return voluntary_pension + insurance + service_purchase + donations + mortgage_interest +
               children + disabled_children + reduced_capacity;
    }
    bool operator==(const ReliefItems&) const = default;
};

struct ReliefResult {
    Money taxable_base;
    ReliefItems deductions;
};

/// Percentage caps are taken against the pre-relief base independently and
/// rounded down to the stotinka. Mortgage interest is prorated to the capped
/// principal. Disabled children get the disabled relief only and are not
/// counted in the 1/2/3+ scale. The taxable base is floored at zero.
ReliefResult apply_reliefs(Money annual_base, const ReliefClaims& claims, const ReliefRules& rules);

/// Schedule must be annual.
Money annual_tax(Money annual_base, const ReliefClaims& claims, const ReliefRules& rules,
                 const Schedule& schedule, RateScale scale = RateScale::one());

}  // namespace taxsim
