#include "taxsim/policy.hpp"

#include "taxsim/errors.hpp"

#include <algorithm>
#include <initializer_list>
#include <limits>
#include <set>

namespace taxsim {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(HouseholdMode m) {
    switch (m) {
        case HouseholdMode::individual: return "individual";
        case HouseholdMode::nit: return "nit";
        case HouseholdMode::per_member: return "per_member";
    }
    return "individual";
}

HouseholdMode parse_household_mode(std::string_view s) {
    if (s == "individual") return HouseholdMode::individual;
    if (s == "nit") return HouseholdMode::nit;
    if (s == "per_member") return HouseholdMode::per_member;
    throw InvalidInput("unknown household mode '" + std::string(s) + "'");
}

std::vector<std::string> validate_policy(const Policy& p) {
    std::vector<std::string> out;
    if (p.name.empty()) out.emplace_back("policy name is empty");
    for (const auto& v : validate_schedule(p.schedule)) out.push_back("schedule: " + v);
    if (p.relief_rules)
        for (const auto& v : validate_rules(*p.relief_rules)) out.push_back("relief_rules: " + v);

    const Period want = p.household_mode == HouseholdMode::individual ? Period::annual : Period::monthly;
    if (p.schedule.period != want)
        out.push_back(std::string(to_string(p.household_mode)) + " mode requires a " +
                      std::string(to_string(want)) + " schedule");
    if (p.household_mode == HouseholdMode::nit) {
        if (!p.nit) {
            out.emplace_back("nit mode requires nit parameters");
        } else {
            if (p.nit->social_minimum_per_capita < Money{0}) out.emplace_back("negative social minimum");
            if (!p.nit->transfer_slope.valid()) out.emplace_back("transfer slope out of range");
            if (p.nit->apply_reliefs && !p.relief_rules)
                out.emplace_back("nit apply_reliefs requires relief_rules");
        }
    }
    if (p.pooled && p.household_mode != HouseholdMode::per_member)
        out.emplace_back("pooled is only valid in per_member mode");
    if (!p.collection_rate.valid()) out.emplace_back("collection rate out of range");
    if (p.rate_scale.units < 0) out.emplace_back("negative rate scale");
    return out;
}

void require_valid(const Policy& p) {
    auto v = validate_policy(p);
    if (v.empty()) return;
    std::string msg = "invalid policy '" + p.name + "':";
    for (const auto& e : v) msg += " " + e + ";";
    msg.pop_back();
    throw InvalidInput(msg);
}

NitParams nit_params(const Policy& p) {
    NitParams params;
    params.schedule = p.schedule;
    if (p.nit) {
        params.social_minimum_per_capita = p.nit->social_minimum_per_capita;
        params.transfer_slope = p.nit->transfer_slope;
    }
    return params;
}

Policy scale_policy(const Policy& p, RateScale s) {
    Policy out = p;
    out.rate_scale = p.rate_scale * s;
    return out;
}

std::optional<RateScale> max_scale(const Policy& p) {
    std::int32_t top = 0;
    for (const auto& b : p.schedule.brackets) top = std::max(top, b.rate.bp);
    if (top == 0 || p.rate_scale.units == 0) return std::nullopt;
    Wide num = kTaxDenominator * RateScale::kOne;
    Wide den = static_cast<Wide>(top) * p.rate_scale.units;
    Wide units = num / den;
    if (units > std::numeric_limits<std::int64_t>::max()) units = std::numeric_limits<std::int64_t>::max();
    return RateScale::from_units(static_cast<std::int64_t>(units));
}

namespace {

Schedule brackets_of(std::initializer_list<std::pair<std::int64_t, std::int32_t>> bands, ApplicationMode mode,
                     Period period) {
    Schedule s;
    s.mode = mode;
    s.period = period;
    for (auto [lower_bgn, pct] : bands) s.brackets.push_back({bgn(lower_bgn), Rate::percent(pct)});
    return s;
}

}  // namespace

Policy preset_flat_2008() {
    Policy p;
    p.name = "flat_2008";
    p.schedule = Schedule::flat(Rate::percent(10), Period::annual);
    p.relief_rules = ReliefRules{};
    p.household_mode = HouseholdMode::individual;
    return p;
}

Policy preset_proposed_progressive(ApplicationMode mode) {
    Policy p;
    p.name = "proposed_progressive";
    // Bands normalized to inclusive lower bounds; the top band is open-ended.
    p.schedule = brackets_of({{0, 0}, {300, 10}, {1'000, 12}, {2'000, 14}, {4'000, 16}, {6'000, 18}, {8'000, 20}},
                             mode, Period::monthly);
    p.household_mode = HouseholdMode::per_member;
    return p;
}

Policy preset_nit_2016() {
    Policy p;
    p.name = "nit_2016";
    p.schedule = Schedule::flat(Rate::percent(10), Period::monthly);
    p.household_mode = HouseholdMode::nit;
    p.nit = NitOptions{};
    return p;
}

Policy preset_socialist_1970s() {
    Policy p;
    p.name = "socialist_1970s";
    // Endpoints 120 (exempt below), 8 % from 120 and 14 % above 340 are
    // historical; the interior steps are illustrative.
    p.schedule = brackets_of({{0, 0}, {120, 8}, {130, 9}, {180, 10}, {230, 11}, {280, 12}, {310, 13}, {340, 14}},
                             ApplicationMode::slab, Period::monthly);
    p.household_mode = HouseholdMode::per_member;
    p.collection_rate = Rate{9900};
    return p;
}

std::vector<Policy> preset_pack() {
    return {preset_flat_2008(), preset_proposed_progressive(), preset_nit_2016(), preset_socialist_1970s()};
}

std::optional<Policy> find_preset(std::string_view name) {
    for (auto& p : preset_pack())
        if (p.name == name) return p;
    return std::nullopt;
}

std::vector<AddonSchedule> socialist_addons() {
    return {
        {"fee_income", "annual gross fee income of scientists, artists and cultural workers; 50 % above 40,000 BGN",
         brackets_of({{0, 10}, {10'000, 20}, {20'000, 30}, {30'000, 40}, {40'000, 50}}, ApplicationMode::marginal,
                     Period::annual)},
        {"rental_income", "annual rental income, 9 % up to 81 %",
         brackets_of({{0, 9}, {1'200, 25}, {2'400, 45}, {4'800, 65}, {9'600, 81}}, ApplicationMode::marginal,
                     Period::annual)},
        {"bachelor", "10 % on the income of people without a family with children",
         Schedule::flat(Rate::percent(10), Period::monthly)},
    };
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void require_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    if (!j.is_object()) throw InvalidInput(std::string(what) + " must be an object");
    std::set<std::string_view> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw InvalidInput("unknown field '" + k + "' in " + std::string(what));
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
    return *it;
}

std::string str(const json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_string()) throw InvalidInput(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::int32_t int32(const json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number_integer()) throw InvalidInput(std::string("field '") + key + "' must be an integer");
    auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<std::int32_t>::min() || x > std::numeric_limits<std::int32_t>::max())
        throw InvalidInput(std::string("field '") + key + "' out of range");
    return static_cast<std::int32_t>(x);
}

bool boolean(const json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_boolean()) throw InvalidInput(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

}  // namespace

ordered_json schedule_to_json(const Schedule& s) {
    ordered_json brackets = ordered_json::array();
    for (const auto& b : s.brackets)
        brackets.push_back({{"lower_bgn", format_money(b.lower)}, {"rate_bp", b.rate.bp}});
    return {{"period", to_string(s.period)}, {"mode", to_string(s.mode)}, {"brackets", brackets}};
}

Schedule schedule_from_json(const json& j) {
    require_keys(j, {"period", "mode", "brackets"}, "schedule");
    Schedule s;
    s.period = parse_period(str(j, "period"));
    s.mode = parse_mode(str(j, "mode"));
    const auto& arr = field(j, "brackets");
    if (!arr.is_array()) throw InvalidInput("schedule brackets must be an array");
    for (const auto& b : arr) {
        require_keys(b, {"lower_bgn", "rate_bp"}, "bracket");
        s.brackets.push_back({parse_money(str(b, "lower_bgn")), Rate{int32(b, "rate_bp")}});
    }
    return s;
}

ordered_json rules_to_json(const ReliefRules& r) {
    return {
        {"voluntary_pension_cap_bp", r.voluntary_pension_cap.bp},
        {"insurance_cap_bp", r.insurance_cap.bp},
        {"donation_cap_bp", r.donation_cap.bp},
        {"mortgage_principal_cap_bgn", format_money(r.mortgage_principal_cap)},
        {"child_relief_bgn",
         {format_money(r.child_relief[0]), format_money(r.child_relief[1]), format_money(r.child_relief[2])}},
        {"disabled_child_relief_bgn", format_money(r.disabled_child_relief)},
        {"reduced_capacity_relief_bgn", format_money(r.reduced_capacity_relief)},
        {"reduced_capacity_threshold_pct", r.reduced_capacity_threshold_pct},
    };
}

ReliefRules rules_from_json(const json& j) {
    require_keys(j,
                 {"voluntary_pension_cap_bp", "insurance_cap_bp", "donation_cap_bp", "mortgage_principal_cap_bgn",
                  "child_relief_bgn", "disabled_child_relief_bgn", "reduced_capacity_relief_bgn",
                  "reduced_capacity_threshold_pct"},
                 "relief_rules");
    ReliefRules r;
    r.voluntary_pension_cap = Rate{int32(j, "voluntary_pension_cap_bp")};
    r.insurance_cap = Rate{int32(j, "insurance_cap_bp")};
    r.donation_cap = Rate{int32(j, "donation_cap_bp")};
    r.mortgage_principal_cap = parse_money(str(j, "mortgage_principal_cap_bgn"));
    const auto& cr = field(j, "child_relief_bgn");
    if (!cr.is_array() || cr.size() != 3 || !cr[0].is_string() || !cr[1].is_string() || !cr[2].is_string())
        throw InvalidInput("child_relief_bgn must be an array of 3 amounts");
    for (std::size_t i = 0; i < 3; ++i) r.child_relief[i] = parse_money(cr[i].get<std::string>());
    r.disabled_child_relief = parse_money(str(j, "disabled_child_relief_bgn"));
    r.reduced_capacity_relief = parse_money(str(j, "reduced_capacity_relief_bgn"));
    r.reduced_capacity_threshold_pct = int32(j, "reduced_capacity_threshold_pct");
    return r;
}

ordered_json policy_to_json(const Policy& p) {
    ordered_json j;
    j["name"] = p.name;
    j["household_mode"] = to_string(p.household_mode);
    j["schedule"] = schedule_to_json(p.schedule);
    j["relief_rules"] = p.relief_rules ? rules_to_json(*p.relief_rules) : ordered_json(nullptr);
    if (p.nit) {
        j["nit"] = {{"social_minimum_bgn", format_money(p.nit->social_minimum_per_capita)},
                    {"transfer_slope_bp", p.nit->transfer_slope.bp},
                    {"apply_reliefs", p.nit->apply_reliefs}};
    } else {
        j["nit"] = nullptr;
    }
    j["pooled"] = p.pooled;
    j["collection_rate"] = format_rate_fraction(p.collection_rate);
    j["rate_scale"] = format_scale(p.rate_scale);
    return j;
}

Policy policy_from_json(const json& j) {
    require_keys(j, {"name", "household_mode", "schedule", "relief_rules", "nit", "pooled", "collection_rate",
                     "rate_scale"},
                 "policy");
    Policy p;
    p.name = str(j, "name");
    p.household_mode = parse_household_mode(str(j, "household_mode"));
    p.schedule = schedule_from_json(field(j, "schedule"));
    if (auto it = j.find("relief_rules"); it != j.end() && !it->is_null()) p.relief_rules = rules_from_json(*it);
    if (auto it = j.find("nit"); it != j.end() && !it->is_null()) {
        require_keys(*it, {"social_minimum_bgn", "transfer_slope_bp", "apply_reliefs"}, "nit");
        NitOptions n;
        if (it->contains("social_minimum_bgn")) n.social_minimum_per_capita = parse_money(str(*it, "social_minimum_bgn"));
        if (it->contains("transfer_slope_bp")) n.transfer_slope = Rate{int32(*it, "transfer_slope_bp")};
        if (it->contains("apply_reliefs")) n.apply_reliefs = boolean(*it, "apply_reliefs");
        p.nit = n;
    }
    if (j.contains("pooled")) p.pooled = boolean(j, "pooled");
    if (j.contains("collection_rate")) p.collection_rate = parse_rate_fraction(str(j, "collection_rate"));
    if (j.contains("rate_scale")) p.rate_scale = parse_scale(str(j, "rate_scale"));
    return p;
}

std::string policy_to_text(const Policy& p) { return policy_to_json(p).dump(2) + "\n"; }

Policy policy_from_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("policy file is not valid JSON: ") + e.what());
    }
    return policy_from_json(j);
}

}  // namespace taxsim
