#include "taxsim/household.hpp"

#include "taxsim/errors.hpp"
#include "taxsim/policy.hpp"

#include <algorithm>
#include <set>

namespace taxsim {

std::string_view to_string(Role r) { return r == Role::adult ? "adult" : "child"; }

Role parse_role(std::string_view s) {
    if (s == "adult") return Role::adult;
    if (s == "child") return Role::child;
    throw InvalidInput("unknown role '" + std::string(s) + "'");
}

Money Household::monthly_income() const {
    Money total;
    for (const auto& m : members) total += m.monthly_income;
    return total;
}

std::size_t Household::adults() const {
    return static_cast<std::size_t>(
        std::count_if(members.begin(), members.end(), [](const Member& m) { return m.role == Role::adult; }));
}

std::size_t Household::children() const { return members.size() - adults(); }

std::vector<std::string> validate_household(const Household& h) {
    std::vector<std::string> out;
    if (h.adults() == 0) out.emplace_back("household " + h.id + " has no adult");
    std::set<std::string_view> ids;
    for (const auto& m : h.members) {
        if (!ids.insert(m.id).second) out.push_back("household " + h.id + " has duplicate member id " + m.id);
        if (m.monthly_income < Money{0}) out.push_back("member " + m.id + " has negative income");
        for (const auto& v : validate_claims(m.claims)) out.push_back("member " + m.id + ": " + v);
    }
    return out;
}

void require_valid(const Household& h) {
    auto v = validate_household(h);
    if (v.empty()) return;
    std::string msg;
    for (const auto& e : v) msg += (msg.empty() ? "" : "; ") + e;
    throw ValidationError(msg);
}

Money household_minimum(const Household& h, const NitParams& params) {
    return params.social_minimum_per_capita * static_cast<std::int64_t>(h.members.size());
}

namespace {

Money transfer_for(Money shortfall, Rate slope) {
    return Money{static_cast<std::int64_t>(
        round_half_up(static_cast<Wide>(slope.bp) * shortfall.stotinki, Rate::kFull))};
}

void require_period(const Schedule& s, Period p, std::string_view mode) {
    if (s.period != p)
        throw InvalidInput(std::string(mode) + " mode requires a " + std::string(to_string(p)) + " schedule");
}

// Household-wide deductions for NIT policies that apply reliefs: each
// member's claims are evaluated against the household's annualized excess.
ReliefResult pooled_reliefs(const Household& h, Money annual_excess, const ReliefRules& rules) {
    ReliefItems sum;
    for (const auto& m : h.members) {
        auto d = apply_reliefs(annual_excess, m.claims, rules).deductions;
        sum.voluntary_pension += d.voluntary_pension;
        sum.insurance += d.insurance;
        sum.service_purchase += d.service_purchase;
        sum.donations += d.donations;
        sum.mortgage_interest += d.mortgage_interest;
        sum.children += d.children;
        sum.disabled_children += d.disabled_children;
        sum.reduced_capacity += d.reduced_capacity;
    }
    return {std::max(Money{0}, annual_excess - sum.total()), sum};
}

}  // namespace

Money nit_tax(const Household& h, const NitParams& params, RateScale scale) {
    require_period(params.schedule, Period::monthly, "nit");
    Money income = h.monthly_income();
    Money minimum = household_minimum(h, params);
    if (income < minimum) return -transfer_for(minimum - income, params.transfer_slope);
    return compute_tax(params.schedule, income - minimum, scale);
}

Money per_member_tax(const Household& h, const Schedule& schedule, RateScale scale) {
    require_period(schedule, Period::monthly, "per_member");
    Money total;
    for (const auto& m : h.members) total += compute_tax(schedule, m.monthly_income, scale);
    return total;
}

Money monthly_equivalent(Money amount, Period period) {
    if (period == Period::monthly) return amount;
    return Money{static_cast<std::int64_t>(round_half_up(amount.stotinki, 12))};
}

Money household_tax(const Household& h, const Policy& policy) {
    switch (policy.household_mode) {
        case HouseholdMode::individual: {
            require_period(policy.schedule, Period::annual, "individual");
            Money total;
            for (const auto& m : h.members) {
                Money base = m.monthly_income * 12;
                total += policy.relief_rules
                             ? annual_tax(base, m.claims, *policy.relief_rules, policy.schedule, policy.rate_scale)
                             : compute_tax(policy.schedule, base, policy.rate_scale);
            }
            return total;
        }
        case HouseholdMode::nit: {
            auto params = nit_params(policy);
            bool reliefs = policy.nit && policy.nit->apply_reliefs && policy.relief_rules;
            if (!reliefs) return nit_tax(h, params, policy.rate_scale);
            require_period(params.schedule, Period::monthly, "nit");
            Money income = h.monthly_income();
            Money minimum = household_minimum(h, params);
            if (income < minimum) return -transfer_for(minimum - income, params.transfer_slope);
            auto r = pooled_reliefs(h, (income - minimum) * 12, *policy.relief_rules);
            return compute_tax(params.schedule, monthly_equivalent(r.taxable_base, Period::annual), policy.rate_scale);
        }
        case HouseholdMode::per_member:
            if (policy.pooled) {
                require_period(policy.schedule, Period::monthly, "per_member");
                return compute_tax(policy.schedule, h.monthly_income(), policy.rate_scale);
            }
            return per_member_tax(h, policy.schedule, policy.rate_scale);
    }
    throw InvalidInput("unknown household mode");
}

HouseholdBreakdown household_breakdown(const Household& h, const Policy& policy) {
    require_valid(policy);
    require_valid(h);
    HouseholdBreakdown out;
    out.household_id = h.id;
    out.period = policy.schedule.period;
    const auto scale = policy.rate_scale;

    switch (policy.household_mode) {
        case HouseholdMode::individual:
            require_period(policy.schedule, Period::annual, "individual");
            for (const auto& m : h.members) {
                MemberBreakdown mb;
                mb.member_id = m.id;
                mb.income = m.monthly_income * 12;
                mb.taxable_base = mb.income;
                if (policy.relief_rules) {
                    mb.reliefs = apply_reliefs(mb.income, m.claims, *policy.relief_rules);
                    mb.taxable_base = mb.reliefs->taxable_base;
                }
                mb.brackets = bracket_breakdown(policy.schedule, mb.taxable_base, scale);
                mb.tax = compute_tax(policy.schedule, mb.taxable_base, scale);
                out.tax += mb.tax;
                out.members.push_back(std::move(mb));
            }
            out.income = h.monthly_income() * 12;
            break;
        case HouseholdMode::nit: {
            auto params = nit_params(policy);
            require_period(params.schedule, Period::monthly, "nit");
            NitBreakdown nb;
            nb.income = h.monthly_income();
            nb.minimum = household_minimum(h, params);
            if (nb.income < nb.minimum) {
                nb.transfer = transfer_for(nb.minimum - nb.income, params.transfer_slope);
                nb.tax = -nb.transfer;
            } else {
                nb.taxable_excess = nb.income - nb.minimum;
                Money base = nb.taxable_excess;
                if (policy.nit && policy.nit->apply_reliefs && policy.relief_rules) {
                    nb.reliefs = pooled_reliefs(h, nb.taxable_excess * 12, *policy.relief_rules);
                    base = monthly_equivalent(nb.reliefs->taxable_base, Period::annual);
                }
                nb.brackets = bracket_breakdown(params.schedule, base, scale);
                nb.tax = compute_tax(params.schedule, base, scale);
            }
            out.income = nb.income;
            out.tax = nb.tax;
            out.nit = std::move(nb);
            break;
        }
        case HouseholdMode::per_member:
            require_period(policy.schedule, Period::monthly, "per_member");
            out.income = h.monthly_income();
            if (policy.pooled) {
                MemberBreakdown mb;
                mb.member_id = h.id;
                mb.income = out.income;
                mb.taxable_base = out.income;
                mb.brackets = bracket_breakdown(policy.schedule, out.income, scale);
                mb.tax = compute_tax(policy.schedule, out.income, scale);
                out.tax = mb.tax;
                out.members.push_back(std::move(mb));
                break;
            }
            for (const auto& m : h.members) {
                MemberBreakdown mb;
                mb.member_id = m.id;
                mb.income = m.monthly_income;
                mb.taxable_base = m.monthly_income;
                mb.brackets = bracket_breakdown(policy.schedule, m.monthly_income, scale);
                mb.tax = compute_tax(policy.schedule, m.monthly_income, scale);
                out.tax += mb.tax;
                out.members.push_back(std::move(mb));
            }
            break;
    }
    return out;
}

}  // namespace taxsim
