#pragma once

#include "taxsim/household.hpp"
#include "taxsim/money.hpp"
#include "taxsim/relief.hpp"
#include "taxsim/schedule.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taxsim {

/// individual: annual schedule per member after reliefs.
/// nit: negative income tax on pooled household income (monthly).
/// per_member: monthly schedule on each member's income, no reliefs.
enum class HouseholdMode { individual, nit, per_member };
std::string_view to_string(HouseholdMode m);
HouseholdMode parse_household_mode(std::string_view s);

struct NitOptions {
    Money social_minimum_per_capita = bgn(300);
    Rate transfer_slope{Rate::kFull};
    /// Run the annualized excess through relief_rules before the schedule.
    bool apply_reliefs = false;

    bool operator==(const NitOptions&) const = default;
};

struct Policy {
    std::string name;
    Schedule schedule;
    std::optional<ReliefRules> relief_rules;
    HouseholdMode household_mode = HouseholdMode::individual;
    std::optional<NitOptions> nit;
    /// per_member only: tax pooled household income instead of each member.
    bool pooled = false;
    Rate collection_rate{Rate::kFull};
    RateScale rate_scale = RateScale::one();

    bool operator==(const Policy&) const = default;
};

std::vector<std::string> validate_policy(const Policy& p);
void require_valid(const Policy& p);

NitParams nit_params(const Policy& p);

/// Multiplies the policy's rate scale by `s`. scale_policy(p, 1) == p.
Policy scale_policy(const Policy& p, RateScale s);

/// Largest scale at which no bracket rate exceeds 100 %. Zero-rate
/// schedules return nullopt (scaling has no effect).
std::optional<RateScale> max_scale(const Policy& p);

// Presets. Rates and thresholds follow the Bulgarian regimes; the
// interior socialist bands and add-on schedules are illustrative.
Policy preset_flat_2008();
Policy preset_proposed_progressive(ApplicationMode mode = ApplicationMode::slab);
Policy preset_nit_2016();
Policy preset_socialist_1970s();

std::vector<Policy> preset_pack();
std::optional<Policy> find_preset(std::string_view name);

/// Schedules for separately labeled income streams under the socialist
/// regime. Not part of household_tax; disabled by default.
struct AddonSchedule {
    std::string label;
    std::string description;
    Schedule schedule;
    bool enabled = false;
};
std::vector<AddonSchedule> socialist_addons();

nlohmann::ordered_json schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);
nlohmann::ordered_json rules_to_json(const ReliefRules& r);
ReliefRules rules_from_json(const nlohmann::json& j);
nlohmann::ordered_json policy_to_json(const Policy& p);
Policy policy_from_json(const nlohmann::json& j);

/// Human-editable policy file (indented JSON, trailing newline).
std::string policy_to_text(const Policy& p);
Policy policy_from_text(std::string_view text);

}  // namespace taxsim
