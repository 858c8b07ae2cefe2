#include "taxsim/report_json.hpp"

#include "taxsim/errors.hpp"
#include "taxsim/policy.hpp"

namespace taxsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json ratio(const std::optional<Rational>& q) {
    if (!q) return nullptr;
    return format_decimal(*q, kRatioDigits);
}

ordered_json lorenz_json(const std::vector<LorenzPoint>& pts, std::size_t max_points) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : thin_lorenz(pts, max_points))
        arr.push_back({format_decimal(p.population, kRatioDigits), format_decimal(p.income, kRatioDigits)});
    return arr;
}

ordered_json slices_json(const std::vector<BracketSlice>& slices) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : slices) {
        arr.push_back({{"lower_bgn", format_money(s.lower)},
                       {"upper_bgn", s.upper ? ordered_json(format_money(*s.upper)) : ordered_json(nullptr)},
                       {"rate_bp", s.rate.bp},
                       {"portion_bgn", format_money(s.portion)},
                       {"tax_bgn", format_money(round_money(s.tax))}});
    }
    return arr;
}

ordered_json reliefs_json(const std::optional<ReliefResult>& r) {
    if (!r) return nullptr;
    const auto& d = r->deductions;
    return {{"voluntary_pension_bgn", format_money(d.voluntary_pension)},
            {"insurance_bgn", format_money(d.insurance)},
            {"service_purchase_bgn", format_money(d.service_purchase)},
            {"donations_bgn", format_money(d.donations)},
            {"mortgage_interest_bgn", format_money(d.mortgage_interest)},
            {"children_bgn", format_money(d.children)},
            {"disabled_children_bgn", format_money(d.disabled_children)},
            {"reduced_capacity_bgn", format_money(d.reduced_capacity)},
            {"total_bgn", format_money(d.total())},
            {"taxable_base_bgn", format_money(r->taxable_base)}};
}

Money money_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) return Money{};
    if (!it->is_string()) throw InvalidInput(std::string("field '") + key + "' must be a decimal string");
    return parse_money(it->get<std::string>());
}

int int_field(const json& j, const char* key, int fallback = 0) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) throw InvalidInput(std::string("field '") + key + "' must be an integer");
    return it->get<int>();
}

}  // namespace

std::vector<LorenzPoint> thin_lorenz(const std::vector<LorenzPoint>& pts, std::size_t max_points) {
    if (max_points < 2 || pts.size() <= max_points) return pts;
    const std::size_t n = pts.size() - 1;
    std::vector<LorenzPoint> out;
    out.reserve(max_points);
    for (std::size_t k = 0; k < max_points; ++k) out.push_back(pts[k * n / (max_points - 1)]);
    return out;
}

std::string lorenz_to_csv(const MetricsReport& r) {
    std::string out = "population_share,pre_tax_share,post_tax_share\n";
    const auto& grid = r.lorenz_pre.empty() ? r.lorenz_post : r.lorenz_pre;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += format_decimal(grid[i].population, kRatioDigits) + ",";
        if (!r.lorenz_pre.empty()) out += format_decimal(r.lorenz_pre[i].income, kRatioDigits);
        out += ",";
        if (!r.lorenz_post.empty()) out += format_decimal(r.lorenz_post[i].income, kRatioDigits);
        out += "\n";
    }
    return out;
}

ordered_json report_to_json(const MetricsReport& r, std::size_t max_lorenz_points) {
    ordered_json j;
    j["policy"] = r.policy_name;
    j["period"] = to_string(r.period);
    j["households"] = r.households;
    j["total_income_bgn"] = format_money(r.total_income);
    j["total_tax_assessed_bgn"] = format_money(r.total_tax_assessed);
    j["collection_rate"] = format_rate_fraction(r.collection_rate);
    j["total_revenue_bgn"] = format_money(r.total_revenue);
    j["gini_pre"] = ratio(r.gini_pre);
    j["gini_post"] = ratio(r.gini_post);
    j["redistribution"] = ratio(r.redistribution);
    ordered_json shares = ordered_json::array();
    for (const auto& s : r.top_shares)
        shares.push_back({{"p", format_decimal(s.p, 4)}, {"pre", ratio(s.pre)}, {"post", ratio(s.post)}});
    j["top_shares"] = shares;
    ordered_json deciles = ordered_json::array();
    for (const auto& d : r.deciles)
        deciles.push_back({{"decile", d.decile},
                           {"households", d.households},
                           {"income_bgn", format_money(d.income)},
                           {"tax_bgn", format_money(d.tax)},
                           {"effective_rate", ratio(d.effective_rate)}});
    j["deciles"] = deciles;
    j["lorenz_pre"] = lorenz_json(r.lorenz_pre, max_lorenz_points);
    j["lorenz_post"] = lorenz_json(r.lorenz_post, max_lorenz_points);
    return j;
}

ordered_json winners_losers_to_json(const WinnersLosers& w) {
    ordered_json hs = ordered_json::array();
    for (const auto& d : w.households)
        hs.push_back({{"household_id", d.household_id},
                      {"tax_a_bgn", format_money(d.tax_a)},
                      {"tax_b_bgn", format_money(d.tax_b)},
                      {"delta_bgn", format_money(d.delta)}});
    return {{"baseline", w.policy_a},
            {"policy", w.policy_b},
            {"period", to_string(w.period)},
            {"winners", w.winners},
            {"losers", w.losers},
            {"unchanged", w.unchanged},
            {"households", hs}};
}

ordered_json comparison_to_json(const ComparisonReport& c) {
    ordered_json reports = ordered_json::array();
    for (const auto& r : c.reports) reports.push_back(report_to_json(r));
    ordered_json pairs = ordered_json::array();
    for (const auto& w : c.versus_baseline) pairs.push_back(winners_losers_to_json(w));
    return {{"reports", reports}, {"versus_baseline", pairs}};
}

ordered_json sweep_to_json(const std::vector<SweepPoint>& points) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : points) arr.push_back({{"value", p.value}, {"report", report_to_json(p.report)}});
    return arr;
}

ordered_json solve_to_json(const SolveResult& s) {
    return {{"scale", format_scale(s.scale)},
            {"revenue_bgn", format_money(s.revenue)},
            {"iterations", s.iterations},
            {"bracket_low", format_scale(s.bracket_low)},
            {"bracket_high", format_scale(s.bracket_high)}};
}

ordered_json solve_to_json(const std::string& policy, Money target, Money tolerance, const SolveResult& s) {
    ordered_json j = ordered_json::object();
    j["policy"] = policy;
    j["target_bgn"] = format_money(target);
    j["tolerance_bgn"] = format_money(tolerance);
    j.update(solve_to_json(s));
    return j;
}

ordered_json breakdown_to_json(const HouseholdBreakdown& b) {
    ordered_json members = ordered_json::array();
    for (const auto& m : b.members)
        members.push_back({{"member_id", m.member_id},
                           {"income_bgn", format_money(m.income)},
                           {"reliefs", reliefs_json(m.reliefs)},
                           {"taxable_base_bgn", format_money(m.taxable_base)},
                           {"brackets", slices_json(m.brackets)},
                           {"tax_bgn", format_money(m.tax)}});
    ordered_json nit = nullptr;
    if (b.nit) {
        const auto& n = *b.nit;
        nit = {{"minimum_bgn", format_money(n.minimum)},
               {"income_bgn", format_money(n.income)},
               {"transfer_bgn", format_money(n.transfer)},
               {"taxable_excess_bgn", format_money(n.taxable_excess)},
               {"reliefs", reliefs_json(n.reliefs)},
               {"brackets", slices_json(n.brackets)},
               {"tax_bgn", format_money(n.tax)}};
    }
    return {{"household_id", b.household_id},
            {"period", to_string(b.period)},
            {"income_bgn", format_money(b.income)},
            {"members", members},
            {"nit", nit},
            {"tax_bgn", format_money(b.tax)},
            {"monthly_tax_bgn", format_money(monthly_equivalent(b.tax, b.period))}};
}

ordered_json claims_to_json(const ReliefClaims& c) {
    return {{"pension_paid", format_money(c.voluntary_pension_paid)},
            {"insurance_paid", format_money(c.insurance_paid)},
            {"service_purchase_paid", format_money(c.service_purchase_paid)},
            {"donations", format_money(c.donations)},
            {"mortgage_interest", format_money(c.mortgage_interest_paid)},
            {"mortgage_principal", format_money(c.mortgage_principal)},
            {"children", c.children},
            {"disabled_children", c.disabled_children},
            {"reduced_capacity_pct", c.reduced_capacity_pct},
            {"young_family", c.young_family_eligible}};
}

ReliefClaims claims_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("claims must be an object");
    ReliefClaims c;
    c.voluntary_pension_paid = money_field(j, "pension_paid");
    c.insurance_paid = money_field(j, "insurance_paid");
    c.service_purchase_paid = money_field(j, "service_purchase_paid");
    c.donations = money_field(j, "donations");
    c.mortgage_interest_paid = money_field(j, "mortgage_interest");
    c.mortgage_principal = money_field(j, "mortgage_principal");
    c.children = int_field(j, "children");
    c.disabled_children = int_field(j, "disabled_children");
    c.reduced_capacity_pct = int_field(j, "reduced_capacity_pct");
    if (auto it = j.find("young_family"); it != j.end()) {
        if (!it->is_boolean()) throw InvalidInput("field 'young_family' must be a boolean");
        c.young_family_eligible = it->get<bool>();
    }
    return c;
}

ordered_json household_to_json(const Household& h) {
    ordered_json members = ordered_json::array();
    for (const auto& m : h.members)
        members.push_back({{"id", m.id},
                           {"role", to_string(m.role)},
                           {"monthly_income_bgn", format_money(m.monthly_income)},
                           {"claims", claims_to_json(m.claims)}});
    return {{"id", h.id}, {"members", members}};
}

Household household_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("household must be an object");
    Household h;
    if (auto it = j.find("id"); it != j.end()) {
        if (!it->is_string()) throw InvalidInput("household id must be a string");
        h.id = it->get<std::string>();
    } else {
        h.id = "household";
    }
    auto it = j.find("members");
    if (it == j.end() || !it->is_array()) throw InvalidInput("household members must be an array");
    std::size_t n = 0;
    for (const auto& mj : *it) {
        if (!mj.is_object()) throw InvalidInput("member must be an object");
        Member m;
        ++n;
        if (auto id = mj.find("id"); id != mj.end() && id->is_string())
            m.id = id->get<std::string>();
        else
            m.id = h.id + "-" + std::to_string(n);
        if (auto role = mj.find("role"); role != mj.end()) {
            if (!role->is_string()) throw InvalidInput("member role must be a string");
            m.role = parse_role(role->get<std::string>());
        }
        m.monthly_income = money_field(mj, "monthly_income_bgn");
        if (auto c = mj.find("claims"); c != mj.end() && !c->is_null()) m.claims = claims_from_json(*c);
        h.members.push_back(std::move(m));
    }
    auto v = validate_household(h);
    if (!v.empty()) {
        std::string msg;
        for (const auto& e : v) msg += (msg.empty() ? "" : "; ") + e;
        throw InvalidInput(msg);
    }
    return h;
}

SynthesisParams synthesis_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("synthesis parameters must be an object");
    SynthesisParams p;
    auto seed = j.find("seed");
    if (seed == j.end() || !seed->is_number_unsigned()) throw InvalidInput("synthesis requires a non-negative integer seed");
    p.seed = seed->get<std::uint64_t>();
    if (auto it = j.find("households"); it != j.end()) {
        if (!it->is_number_unsigned()) throw InvalidInput("households must be a non-negative integer");
        p.household_count = it->get<std::size_t>();
    }
    auto weights = [&](const char* key, std::vector<std::uint32_t>& out) {
        auto it = j.find(key);
        if (it == j.end()) return;
        if (!it->is_array()) throw InvalidInput(std::string(key) + " must be an array");
        out.clear();
        for (const auto& w : *it) {
            if (!w.is_number_unsigned()) throw InvalidInput(std::string(key) + " entries must be non-negative integers");
            out.push_back(w.get<std::uint32_t>());
        }
    };
    weights("adult_weights", p.adult_weights);
    weights("child_weights", p.child_weights);
    auto number = [&](const char* key, double& out) {
        auto it = j.find(key);
        if (it == j.end()) return;
        if (!it->is_number()) throw InvalidInput(std::string(key) + " must be a number");
        out = it->get<double>();
    };
    number("income_location", p.income_location);
    number("income_scale", p.income_scale);
    p.income_floor = money_field(j, "income_floor_bgn");
    if (auto it = j.find("claim_child_relief"); it != j.end()) {
        if (!it->is_boolean()) throw InvalidInput("claim_child_relief must be a boolean");
        p.claim_child_relief = it->get<bool>();
    }
    return p;
}

}  // namespace taxsim
