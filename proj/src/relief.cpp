#include "taxsim/relief.hpp"

#include "taxsim/errors.hpp"

#include <algorithm>

namespace taxsim {

std::vector<std::string> validate_rules(const ReliefRules& r) {
    std::vector<std::string> out;
    if (!r.voluntary_pension_cap.valid()) out.emplace_back("voluntary pension cap out of range");
    if (!r.insurance_cap.valid()) out.emplace_back("insurance cap out of range");
    if (!r.donation_cap.valid()) out.emplace_back("donation cap out of range");
    if (r.mortgage_principal_cap < Money{0}) out.emplace_back("negative mortgage principal cap");
    for (auto m : r.child_relief)
        if (m < Money{0}) out.emplace_back("negative child relief");
    if (r.child_relief[0] > r.child_relief[1] || r.child_relief[1] > r.child_relief[2])
        out.emplace_back("child relief must be non-decreasing in child count");
    if (r.disabled_child_relief < Money{0}) out.emplace_back("negative disabled child relief");
    if (r.reduced_capacity_relief < Money{0}) out.emplace_back("negative reduced capacity relief");
    if (r.reduced_capacity_threshold_pct < 1 || r.reduced_capacity_threshold_pct > 100)
        out.emplace_back("reduced capacity threshold out of range");
    return out;
}

std::vector<std::string> validate_claims(const ReliefClaims& c) {
    std::vector<std::string> out;
    auto money = [&](Money m, const char* name) {
        if (m < Money{0}) out.push_back(std::string("negative ") + name);
    };
    money(c.voluntary_pension_paid, "pension_paid");
    money(c.insurance_paid, "insurance_paid");
    money(c.service_purchase_paid, "service_purchase_paid");
    money(c.donations, "donations");
    money(c.mortgage_interest_paid, "mortgage_interest");
    money(c.mortgage_principal, "mortgage_principal");
    if (c.children < 0) out.emplace_back("negative children");
    if (c.disabled_children < 0) out.emplace_back("negative disabled_children");
    if (c.disabled_children > c.children) out.emplace_back("disabled_children exceeds children");
    if (c.reduced_capacity_pct < 0 || c.reduced_capacity_pct > 100)
        out.emplace_back("reduced_capacity_pct out of range");
    return out;
}

namespace {

Money capped(Money paid, Rate cap, Money base) {
    Money limit{static_cast<std::int64_t>(static_cast<Wide>(cap.bp) * base.stotinki / Rate::kFull)};
    return std::min(paid, limit);
}

void require(const std::vector<std::string>& violations, const char* what) {
    if (violations.empty()) return;
    std::string msg = std::string("invalid ") + what + ":";
    for (const auto& v : violations) msg += " " + v + ";";
    msg.pop_back();
    throw InvalidInput(msg);
}

}  // namespace

ReliefResult apply_reliefs(Money annual_base, const ReliefClaims& claims, const ReliefRules& rules) {
    if (annual_base < Money{0}) throw InvalidInput("negative annual base");
    require(validate_claims(claims), "relief claims");
    require(validate_rules(rules), "relief rules");

    ReliefItems d;
    d.voluntary_pension = capped(claims.voluntary_pension_paid, rules.voluntary_pension_cap, annual_base);
    d.insurance = capped(claims.insurance_paid, rules.insurance_cap, annual_base);
    d.service_purchase = claims.service_purchase_paid;
    d.donations = capped(claims.donations, rules.donation_cap, annual_base);

    if (claims.young_family_eligible) {
        const auto principal = claims.mortgage_principal;
        if (principal <= rules.mortgage_principal_cap) {
            d.mortgage_interest = claims.mortgage_interest_paid;
        } else {
            Wide num = static_cast<Wide>(claims.mortgage_interest_paid.stotinki) *
                       rules.mortgage_principal_cap.stotinki;
            d.mortgage_interest = Money{static_cast<std::int64_t>(num / principal.stotinki)};
        }
    }

    int regular = claims.children - claims.disabled_children;
    if (regular > 0) d.children = rules.child_relief[static_cast<std::size_t>(std::min(regular, 3) - 1)];
    d.disabled_children = rules.disabled_child_relief * claims.disabled_children;
    if (claims.reduced_capacity_pct >= rules.reduced_capacity_threshold_pct)
        d.reduced_capacity = rules.reduced_capacity_relief;

    Money taxable = std::max(Money{0}, annual_base - d.total());
    return {taxable, d};
}

Money annual_tax(Money annual_base, const ReliefClaims& claims, const ReliefRules& rules,
                 const Schedule& schedule, RateScale scale) {
    if (schedule.period != Period::annual)
        throw InvalidInput("annual_tax requires an annual schedule");
    return compute_tax(schedule, apply_reliefs(annual_base, claims, rules).taxable_base, scale);
}

}  // namespace taxsim
