#include "taxsim/population.hpp"

#include "taxsim/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace taxsim {

namespace {

constexpr std::size_t kColumns = 14;

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

int parse_count(std::string_view s, std::size_t line, const char* column) {
    if (s.empty() || s.size() > 6) throw ParseError(line, std::string("invalid ") + column + " '" + std::string(s) + "'");
    int v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw ParseError(line, std::string("invalid ") + column + " '" + std::string(s) + "'");
        v = v * 10 + (c - '0');
    }
    return v;
}

Money parse_amount(std::string_view s, std::size_t line, const char* column) {
    Money m;
    try {
        m = parse_money(s);
    } catch (const InvalidInput&) {
        throw ParseError(line, std::string("invalid ") + column + " '" + std::string(s) + "'");
    }
    if (m < Money{0}) throw ParseError(line, std::string("negative ") + column);
    return m;
}

struct Row {
    Member member;
    std::string household_id;
    int children;
    int disabled_children;
};

Row parse_row(std::string_view text, std::size_t line) {
    auto f = split(text);
    if (f.size() != kColumns)
        throw ParseError(line, "expected " + std::to_string(kColumns) + " columns, got " + std::to_string(f.size()));
    Row r;
    if (f[0].empty()) throw ParseError(line, "empty person_id");
    if (f[1].empty()) throw ParseError(line, "empty household_id");
    r.member.id = std::string(f[0]);
    r.household_id = std::string(f[1]);
    try {
        r.member.role = parse_role(f[2]);
    } catch (const InvalidInput& e) {
        throw ParseError(line, e.what());
    }
    r.member.monthly_income = parse_amount(f[3], line, "monthly_income_bgn");
    r.children = parse_count(f[4], line, "children");
    r.disabled_children = parse_count(f[5], line, "disabled_children");
    auto& c = r.member.claims;
    c.reduced_capacity_pct = parse_count(f[6], line, "reduced_capacity_pct");
    if (c.reduced_capacity_pct > 100) throw ParseError(line, "reduced_capacity_pct above 100");
    c.voluntary_pension_paid = parse_amount(f[7], line, "pension_paid");
    c.insurance_paid = parse_amount(f[8], line, "insurance_paid");
    c.service_purchase_paid = parse_amount(f[9], line, "service_purchase_paid");
    c.donations = parse_amount(f[10], line, "donations");
    c.mortgage_interest_paid = parse_amount(f[11], line, "mortgage_interest");
    c.mortgage_principal = parse_amount(f[12], line, "mortgage_principal");
    if (f[13] == "1")
        c.young_family_eligible = true;
    else if (f[13] != "0")
        throw ParseError(line, "young_family must be 0 or 1");
    if (r.disabled_children > r.children) throw ParseError(line, "disabled_children exceeds children");
    return r;
}

}  // namespace

Population load_population(std::string_view csv) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < csv.size()) {
        auto pos = csv.find('\n', start);
        auto end = pos == std::string_view::npos ? csv.size() : pos;
        auto l = csv.substr(start, end - start);
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
        lines.push_back(l);
        start = end + 1;
    }
    if (lines.empty()) throw ParseError(1, "missing header row");
    auto header = lines[0];
    if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
    if (header != kPopulationHeader) throw ParseError(1, "unexpected header row");

    Population out;
    std::map<std::string, std::size_t, std::less<>> index;
    std::map<std::string, std::pair<int, int>, std::less<>> counts;
    std::set<std::string, std::less<>> person_ids;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            if (i + 1 == lines.size()) break;  // trailing newline
            throw ParseError(i + 1, "empty row");
        }
        Row r = parse_row(lines[i], i + 1);
        if (!person_ids.insert(r.member.id).second)
            throw ParseError(i + 1, "duplicate person_id " + r.member.id);
        auto [it, fresh] = index.try_emplace(r.household_id, out.size());
        if (fresh) {
            out.push_back(Household{r.household_id, {}});
            counts.emplace(r.household_id, std::pair{r.children, r.disabled_children});
        } else if (counts.at(r.household_id) != std::pair{r.children, r.disabled_children}) {
            throw ValidationError("household " + r.household_id + ": inconsistent children counts across rows");
        }
        out[it->second].members.push_back(std::move(r.member));
    }

    std::string problems;
    for (auto& h : out) {
        auto [children, disabled] = counts.at(h.id);
        for (auto& m : h.members) {
            if (m.role == Role::adult) {
                m.claims.children = children;
                m.claims.disabled_children = disabled;
                break;
            }
        }
        for (const auto& v : validate_household(h)) problems += (problems.empty() ? "" : "; ") + v;
    }
    if (!problems.empty()) throw ValidationError(problems);
    return out;
}

Population load_population(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading population stream");
    return load_population(ss.str());
}

Population load_population_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open population file " + path.string());
    return load_population(in);
}

std::string export_population(const Population& p) {
    std::string out(kPopulationHeader);
    out += '\n';
    for (const auto& h : p) {
        int children = 0;
        int disabled = 0;
        for (const auto& m : h.members) {
            children += m.claims.children;
            disabled += m.claims.disabled_children;
        }
        for (const auto& m : h.members) {
            const auto& c = m.claims;
            out += m.id + ',' + h.id + ',' + std::string(to_string(m.role)) + ',' + format_money(m.monthly_income) +
                   ',' + std::to_string(children) + ',' + std::to_string(disabled) + ',' +
                   std::to_string(c.reduced_capacity_pct) + ',' + format_money(c.voluntary_pension_paid) + ',' +
                   format_money(c.insurance_paid) + ',' + format_money(c.service_purchase_paid) + ',' +
                   format_money(c.donations) + ',' + format_money(c.mortgage_interest_paid) + ',' +
                   format_money(c.mortgage_principal) + ',' + (c.young_family_eligible ? "1" : "0") + '\n';
        }
    }
    return out;
}

std::vector<std::string> validate_synthesis(const SynthesisParams& p) {
    std::vector<std::string> out;
    if (!p.seed) out.emplace_back("seed is required");
    if (p.adult_weights.empty() || p.adult_weights[0] != 0)
        out.emplace_back("adult_weights must start with a zero weight for 0 adults");
    std::uint64_t adults = 0;
    for (auto w : p.adult_weights) adults += w;
    if (adults == 0) out.emplace_back("adult_weights must have a positive total");
    std::uint64_t kids = 0;
    for (auto w : p.child_weights) kids += w;
    if (kids == 0) out.emplace_back("child_weights must have a positive total");
    if (!std::isfinite(p.income_location)) out.emplace_back("income location must be finite");
    if (!std::isfinite(p.income_scale) || p.income_scale < 0) out.emplace_back("income scale must be finite and >= 0");
    if (p.income_floor < Money{0}) out.emplace_back("income floor must be non-negative");
    if (std::isfinite(p.income_location) && std::isfinite(p.income_scale) &&
        p.income_location + 8 * p.income_scale > 30)
        out.emplace_back("income distribution too wide for money range");
    return out;
}

namespace {

std::size_t weighted(std::mt19937_64& rng, const std::vector<std::uint32_t>& weights) {
    std::uint64_t total = 0;
    for (auto w : weights) total += w;
    std::uint64_t v = rng() % total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (v < weights[i]) return i;
        v -= weights[i];
    }
    return weights.size() - 1;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string padded(std::size_t n, int width) {
    std::string s = std::to_string(n);
    if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
    return s;
}

}  // namespace

Population synthesize(const SynthesisParams& p) {
    auto problems = validate_synthesis(p);
    if (!problems.empty()) {
        std::string msg = "invalid synthesis parameters:";
        for (const auto& e : problems) msg += " " + e + ";";
        msg.pop_back();
        throw InvalidInput(msg);
    }
    std::mt19937_64 rng(*p.seed);
    Population out;
    out.reserve(p.household_count);
    for (std::size_t h = 0; h < p.household_count; ++h) {
        Household hh;
        hh.id = "h" + padded(h + 1, 6);
        auto adults = weighted(rng, p.adult_weights);
        auto children = weighted(rng, p.child_weights);
        std::size_t n = 0;
        for (std::size_t a = 0; a < adults; ++a) {
            double u1 = unit(rng);
            double u2 = unit(rng);
            double z = std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
            double income_bgn = std::exp(p.income_location + p.income_scale * z);
            Member m;
            m.id = hh.id + "-" + std::to_string(++n);
            m.role = Role::adult;
            m.monthly_income = std::max(p.income_floor, Money{std::llround(income_bgn * 100.0)});
            hh.members.push_back(std::move(m));
        }
        for (std::size_t c = 0; c < children; ++c) {
            Member m;
            m.id = hh.id + "-" + std::to_string(++n);
            m.role = Role::child;
            hh.members.push_back(std::move(m));
        }
        if (p.claim_child_relief) hh.members.front().claims.children = static_cast<int>(children);
        out.push_back(std::move(hh));
    }
    return out;
}

std::vector<DemographicPreset> demographic_presets() {
    return {{2015, 7'168'009}, {2030, 6'554'784}, {2050, 5'813'550}, {2070, 5'132'023}};
}

std::optional<DemographicPreset> find_demographic_preset(int year) {
    for (auto d : demographic_presets())
        if (d.year == year) return d;
    return std::nullopt;
}

Population resample(const Population& p, const Rational& factor) {
    if (factor < 0) throw InvalidInput("population scale factor must be non-negative");
    const auto n = p.size();
    if (n == 0) return {};
    auto m = static_cast<std::size_t>(round_to_int(factor * static_cast<std::int64_t>(n)));
    Population out;
    out.reserve(m);
    const int width = static_cast<int>(std::to_string(m).size());
    for (std::size_t k = 0; k < m; ++k) {
        const auto& src = p[static_cast<std::size_t>(static_cast<UWide>(k) * n / m)];
        Household copy = src;
        auto suffix = "~" + padded(k, width);
        copy.id += suffix;
        for (auto& mem : copy.members) mem.id += suffix;
        out.push_back(std::move(copy));
    }
    return out;
}

}  // namespace taxsim
