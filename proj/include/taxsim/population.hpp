#pragma once

// Population ingestion (CSV), seeded synthesis and demographic presets.
//
// CSV columns, UTF-8 with a header row:
//   person_id,household_id,role,monthly_income_bgn,children,disabled_children,
//   reduced_capacity_pct,pension_paid,insurance_paid,service_purchase_paid,
//   donations,mortgage_interest,mortgage_principal,young_family
//
// `children` and `disabled_children` are household-level: every row of a
// household carries the same value. On load they are attached to the
// household's first adult; on export every row carries the household total.

#include "taxsim/household.hpp"
#include "taxsim/money.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taxsim {

using Population = std::vector<Household>;

inline constexpr std::string_view kPopulationHeader =
    "person_id,household_id,role,monthly_income_bgn,children,disabled_children,reduced_capacity_pct,"
    "pension_paid,insurance_paid,service_purchase_paid,donations,mortgage_interest,mortgage_principal,"
    "young_family";

/// Throws ParseError (with 1-based line) on malformed rows and
/// ValidationError naming the household on inconsistent groups.
Population load_population(std::string_view csv);
Population load_population(std::istream& in);
/// Throws IoError when the file cannot be read.
Population load_population_file(const std::filesystem::path& path);

std::string export_population(const Population& p);

/// Household composition and income draws.
///
/// Generator: std::mt19937_64 seeded with `seed`. Per household, in order:
/// one draw for the adult count and one for the child count (each
/// `engine() % total_weight` against the cumulative weights), then for each
/// adult two draws u1, u2 mapped to [0,1) via the top 53 bits, a Box-Muller
/// normal z = sqrt(-2 ln(1-u1)) cos(2 pi u2), and income
/// exp(location + scale * z) BGN rounded to the nearest stotinka. Children
/// have zero income.
struct SynthesisParams {
    std::size_t household_count = 0;
    /// Weight of each adult count, indexed by count. Index 0 must be 0.
    std::vector<std::uint32_t> adult_weights{0, 30, 70};
    /// Weight of each child count, indexed by count.
    std::vector<std::uint32_t> child_weights{40, 30, 20, 10};
    /// Log-normal parameters of adult monthly income, log(BGN).
    double income_location = 6.6846;  // median ~800 BGN
    double income_scale = 0.8;
    /// Optional floor on adult income (e.g. the 460 BGN minimum wage).
    Money income_floor;
    /// First adult claims child relief for the household's children.
    bool claim_child_relief = true;
    std::optional<std::uint64_t> seed;
};

std::vector<std::string> validate_synthesis(const SynthesisParams& p);
Population synthesize(const SynthesisParams& p);

struct DemographicPreset {
    int year;
    std::int64_t population_count;
};

std::vector<DemographicPreset> demographic_presets();
std::optional<DemographicPreset> find_demographic_preset(int year);

/// Deterministic systematic resampling to round(factor * n) households:
/// output household k is input household floor(k * n / m). Copies get
/// a "~k" suffix on household and member ids so ids stay unique.
Population resample(const Population& p, const Rational& factor);

}  // namespace taxsim
