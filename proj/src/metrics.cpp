#include "taxsim/metrics.hpp"

#include "taxsim/errors.hpp"

#include <algorithm>
#include <numeric>

namespace taxsim {

namespace {

void require_incomes(std::span<const Money> incomes) {
    if (incomes.empty()) throw InvalidInput("empty income list");
    for (auto m : incomes)
        if (m < Money{0}) throw InvalidInput("negative income " + format_money(m));
}

Wide total_of(std::span<const Money> xs) {
    Wide s = 0;
    for (auto m : xs) s += m.stotinki;
    return s;
}

std::vector<Money> sorted_copy(std::span<const Money> xs) {
    std::vector<Money> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return v;
}

// Stable processing order: ascending household id.
std::vector<std::size_t> id_order(std::span<const Household> hs) {
    std::vector<std::size_t> idx(hs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return hs[a].id < hs[b].id; });
    return idx;
}

Money collected(Wide assessed, Rate collection_rate) {
    return Money{static_cast<std::int64_t>(round_half_up(assessed * collection_rate.bp, Rate::kFull))};
}

template <class F>
std::optional<Rational> defined(F&& f) {
    try {
        return f();
    } catch (const UndefinedMetric&) {
        return std::nullopt;
    } catch (const InvalidInput&) {
        return std::nullopt;
    }
}

}  // namespace

Rational gini(std::span<const Money> incomes) {
    require_incomes(incomes);
    auto x = sorted_copy(incomes);
    const auto n = static_cast<Wide>(x.size());
    Wide total = total_of(x);
    if (total == 0) throw UndefinedMetric("gini undefined for zero mean income");
    // sum_ij |xi - xj| = 2 * sum_i (2i - n - 1) x_(i), i = 1..n ascending
    Wide weighted = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        Wide rank = static_cast<Wide>(i) + 1;
        weighted += (2 * rank - n - 1) * x[i].stotinki;
    }
    return Rational(to_big(weighted), to_big(n * total));
}

Rational top_share(std::span<const Money> incomes, const Rational& p) {
    require_incomes(incomes);
    if (p <= 0 || p > 1) throw InvalidInput("top share fraction must be in (0, 1]");
    Wide total = total_of(incomes);
    if (total == 0) throw UndefinedMetric("top share undefined for zero total income");
    auto x = sorted_copy(incomes);
    const auto n = static_cast<std::int64_t>(x.size());
    // ceil(p * n)
    Rational pn = p * n;
    BigInt k = boost::multiprecision::numerator(pn) / boost::multiprecision::denominator(pn);
    if (Rational(k) < pn) ++k;
    auto count = static_cast<std::size_t>(k.convert_to<std::int64_t>());
    Wide top = 0;
    for (std::size_t i = 0; i < count; ++i) top += x[x.size() - 1 - i].stotinki;
    return Rational(to_big(top), to_big(total));
}

std::vector<LorenzPoint> lorenz_points(std::span<const Money> incomes) {
    require_incomes(incomes);
    Wide total = total_of(incomes);
    if (total == 0) throw UndefinedMetric("Lorenz curve undefined for zero total income");
    auto x = sorted_copy(incomes);
    const auto n = static_cast<std::int64_t>(x.size());
    const BigInt big_total = to_big(total);
    std::vector<LorenzPoint> out;
    out.reserve(x.size() + 1);
    out.push_back({Rational(0), Rational(0)});
    Wide cum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cum += x[i].stotinki;
        out.push_back({Rational(static_cast<std::int64_t>(i) + 1, n), Rational(to_big(cum), big_total)});
    }
    return out;
}

std::vector<Money> household_incomes(std::span<const Household> households, Period period) {
    std::vector<Money> out;
    out.reserve(households.size());
    const std::int64_t factor = period == Period::annual ? 12 : 1;
    for (const auto& h : households) out.push_back(h.monthly_income() * factor);
    return out;
}

Money revenue(std::span<const Household> households, const Policy& policy) {
    require_valid(policy);
    Wide assessed = 0;
    for (auto i : id_order(households)) assessed += household_tax(households[i], policy).stotinki;
    return collected(assessed, policy.collection_rate);
}

WinnersLosers winners_losers(std::span<const Household> households, const Policy& a, const Policy& b) {
    require_valid(a);
    require_valid(b);
    WinnersLosers out;
    out.policy_a = a.name;
    out.policy_b = b.name;
    const bool same = a.schedule.period == b.schedule.period;
    out.period = same ? a.schedule.period : Period::monthly;
    auto in_period = [&](Money m, Period p) { return same ? m : monthly_equivalent(m, p); };
    for (auto i : id_order(households)) {
        const auto& h = households[i];
        HouseholdDelta d;
        d.household_id = h.id;
        d.tax_a = in_period(household_tax(h, a), a.schedule.period);
        d.tax_b = in_period(household_tax(h, b), b.schedule.period);
        d.delta = d.tax_b - d.tax_a;
        if (d.delta < Money{0})
            ++out.winners;
        else if (d.delta > Money{0})
            ++out.losers;
        else
            ++out.unchanged;
        out.households.push_back(std::move(d));
    }
    return out;
}

std::vector<Rational> default_top_share_points() { return {Rational(1, 100), Rational(1, 10)}; }

MetricsReport evaluate(std::span<const Household> households, const Policy& policy) {
    require_valid(policy);
    MetricsReport r;
    r.policy_name = policy.name;
    r.period = policy.schedule.period;
    r.households = households.size();
    r.collection_rate = policy.collection_rate;

    const auto order = id_order(households);
    const std::int64_t factor = r.period == Period::annual ? 12 : 1;
    std::vector<Money> pre;
    std::vector<Money> tax;
    pre.reserve(order.size());
    tax.reserve(order.size());
    Wide assessed = 0;
    Wide income = 0;
    for (auto i : order) {
        pre.push_back(households[i].monthly_income() * factor);
        tax.push_back(household_tax(households[i], policy));
        assessed += tax.back().stotinki;
        income += pre.back().stotinki;
    }
    r.total_income = Money{static_cast<std::int64_t>(income)};
    r.total_tax_assessed = Money{static_cast<std::int64_t>(assessed)};
    r.total_revenue = collected(assessed, policy.collection_rate);

    std::vector<Money> post(pre.size());
    for (std::size_t k = 0; k < pre.size(); ++k) post[k] = pre[k] - tax[k];

    if (!pre.empty()) {
        r.gini_pre = defined([&] { return gini(pre); });
        r.gini_post = defined([&] { return gini(post); });
        if (r.gini_pre && r.gini_post) r.redistribution = *r.gini_pre - *r.gini_post;
        try {
            r.lorenz_pre = lorenz_points(pre);
        } catch (const std::exception&) {
        }
        try {
            r.lorenz_post = lorenz_points(post);
        } catch (const std::exception&) {
        }
        for (const auto& p : default_top_share_points())
            r.top_shares.push_back({p, defined([&] { return top_share(pre, p); }),
                                    defined([&] { return top_share(post, p); })});
    }

    // Deciles by ascending pre-tax income; ties keep household id order.
    std::vector<std::size_t> rank(pre.size());
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return pre[a] < pre[b]; });
    r.deciles.resize(10);
    for (int d = 0; d < 10; ++d) r.deciles[static_cast<std::size_t>(d)].decile = d + 1;
    for (std::size_t pos = 0; pos < rank.size(); ++pos) {
        auto& d = r.deciles[pos * 10 / rank.size()];
        ++d.households;
        d.income += pre[rank[pos]];
        d.tax += tax[rank[pos]];
    }
    for (auto& d : r.deciles)
        if (d.income > Money{0}) d.effective_rate = Rational(d.tax.stotinki, d.income.stotinki);
    return r;
}

std::vector<ReferenceShare> reference_top1_shares() {
    return {{"US", 1970, Rational(8, 100)}, {"US", 2010, Rational(17, 100)}};
}

}  // namespace taxsim
