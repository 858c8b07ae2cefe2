#include "taxsim/schedule.hpp"

#include "taxsim/errors.hpp"

#include <algorithm>

namespace taxsim {

std::string_view to_string(ApplicationMode m) {
    return m == ApplicationMode::marginal ? "marginal" : "slab";
}

std::string_view to_string(Period p) { return p == Period::monthly ? "monthly" : "annual"; }

ApplicationMode parse_mode(std::string_view s) {
    if (s == "marginal") return ApplicationMode::marginal;
    if (s == "slab") return ApplicationMode::slab;
    throw InvalidInput("unknown schedule mode '" + std::string(s) + "'");
}

Period parse_period(std::string_view s) {
    if (s == "monthly") return Period::monthly;
    if (s == "annual") return Period::annual;
    throw InvalidInput("unknown period '" + std::string(s) + "'");
}

std::string_view to_string(ScheduleClass c) {
    switch (c) {
        case ScheduleClass::progressive: return "progressive";
        case ScheduleClass::proportional: return "proportional";
        case ScheduleClass::regressive: return "regressive";
        case ScheduleClass::mixed: return "mixed";
    }
    return "mixed";
}

Schedule Schedule::flat(Rate r, Period period) {
    return Schedule{{Bracket{Money{0}, r}}, ApplicationMode::marginal, period};
}

std::vector<std::string> validate_schedule(const Schedule& s) {
    std::vector<std::string> out;
    if (s.brackets.empty()) {
        out.emplace_back("schedule has no brackets");
        return out;
    }
    if (s.brackets.front().lower != Money{0}) out.emplace_back("first lower must be 0");
    for (std::size_t i = 0; i < s.brackets.size(); ++i) {
        const auto& b = s.brackets[i];
        auto where = " (bracket " + std::to_string(i) + ")";
        if (b.lower < Money{0}) out.push_back("negative lower bound" + where);
        if (!b.rate.valid()) out.push_back("rate out of range" + where);
        if (i == 0) continue;
        const auto& prev = s.brackets[i - 1];
        if (b.lower == prev.lower)
            out.push_back("duplicate lower bound " + format_money(b.lower) + where);
        else if (b.lower < prev.lower)
            out.push_back("lower bounds not increasing" + where);
    }
    return out;
}

void require_valid(const Schedule& s) {
    auto v = validate_schedule(s);
    if (v.empty()) return;
    std::string msg = "invalid schedule:";
    for (const auto& e : v) msg += " " + e + ";";
    msg.pop_back();
    throw InvalidInput(msg);
}

Wide scaled_rate(Rate r, RateScale scale) {
    Wide eff = static_cast<Wide>(r.bp) * scale.units;
    return std::min(eff, kTaxDenominator);
}

namespace {

// Index of the bracket containing base (schedule already validated).
std::size_t containing(const Schedule& s, Money base) {
    auto it = std::upper_bound(s.brackets.begin(), s.brackets.end(), base,
                               [](Money b, const Bracket& br) { return b < br.lower; });
    return static_cast<std::size_t>(std::distance(s.brackets.begin(), it)) - 1;
}

void require_base(Money base) {
    if (base < Money{0}) throw InvalidInput("negative tax base " + format_money(base));
}

}  // namespace

Wide exact_tax(const Schedule& s, Money base, RateScale scale) {
    require_valid(s);
    require_base(base);
    if (s.mode == ApplicationMode::slab)
        return scaled_rate(s.brackets[containing(s, base)].rate, scale) * base.stotinki;

    Wide total = 0;
    for (std::size_t i = 0; i < s.brackets.size(); ++i) {
        Money lo = s.brackets[i].lower;
        if (base <= lo) break;
        Money hi = i + 1 < s.brackets.size() ? std::min(base, s.brackets[i + 1].lower) : base;
        total += scaled_rate(s.brackets[i].rate, scale) * (hi - lo).stotinki;
    }
    return total;
}

Money compute_tax(const Schedule& s, Money base, RateScale scale) {
    Wide t = round_half_up(exact_tax(s, base, scale), kTaxDenominator);
    return Money{static_cast<std::int64_t>(t)};
}

Rational average_rate(const Schedule& s, Money base) {
    require_valid(s);
    require_base(base);
    if (base == Money{0}) throw UndefinedMetric("average rate undefined at zero base");
    Wide t = exact_tax(s, base);
    return Rational(to_big(t), to_big(kTaxDenominator * base.stotinki));
}

Rate marginal_rate(const Schedule& s, Money base) {
    require_valid(s);
    require_base(base);
    return s.brackets[containing(s, base)].rate;
}

ScheduleClass classify(const Schedule& s, std::span<const Money> grid) {
    if (grid.size() < 2) throw InvalidInput("classification grid needs at least 2 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= Money{0}) throw InvalidInput("classification grid points must be positive");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw InvalidInput("classification grid must be strictly increasing");
    }
    bool up = false;
    bool down = false;
    Rational prev = average_rate(s, grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        Rational cur = average_rate(s, grid[i]);
        if (cur > prev) up = true;
        if (cur < prev) down = true;
        prev = cur;
    }
    if (up && down) return ScheduleClass::mixed;
    if (up) return ScheduleClass::progressive;
    if (down) return ScheduleClass::regressive;
    return ScheduleClass::proportional;
}

std::vector<BracketSlice> bracket_breakdown(const Schedule& s, Money base, RateScale scale) {
    require_valid(s);
    require_base(base);
    auto upper_of = [&](std::size_t i) -> std::optional<Money> {
        if (i + 1 < s.brackets.size()) return s.brackets[i + 1].lower;
        return std::nullopt;
    };
    auto tax_of = [&](std::size_t i, Money portion) {
        return Rational(to_big(scaled_rate(s.brackets[i].rate, scale) * portion.stotinki),
                        to_big(kTaxDenominator));
    };
    std::vector<BracketSlice> out;
    if (s.mode == ApplicationMode::slab) {
        auto i = containing(s, base);
        out.push_back({s.brackets[i].lower, upper_of(i), s.brackets[i].rate, base, tax_of(i, base)});
        return out;
    }
    for (std::size_t i = 0; i < s.brackets.size(); ++i) {
        Money lo = s.brackets[i].lower;
        if (base <= lo && i > 0) break;
        auto up = upper_of(i);
        Money hi = up ? std::min(base, *up) : base;
        Money portion = hi > lo ? hi - lo : Money{0};
        out.push_back({lo, up, s.brackets[i].rate, portion, tax_of(i, portion)});
    }
    return out;
}

Schedule annualized(const Schedule& s) {
    Schedule out = s;
    for (auto& b : out.brackets) b.lower = b.lower * 12;
    out.period = Period::annual;
    return out;
}

}  // namespace taxsim
