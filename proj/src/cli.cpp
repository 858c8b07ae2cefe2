#include "taxsim/cli.hpp"

#include "taxsim/api.hpp"
#include "taxsim/errors.hpp"
#include "taxsim/lab.hpp"
#include "taxsim/report_json.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace taxsim {

using nlohmann::ordered_json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path.string());
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string scalar_text(const ordered_json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

// Flattens nested objects and arrays into dotted metric names; array
// elements are numbered from 1.
void flatten(const ordered_json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i + 1), rows);
    } else {
        rows.emplace_back(prefix, scalar_text(j));
    }
}

std::vector<std::pair<std::string, std::string>> report_rows(const MetricsReport& r) {
    auto j = report_to_json(r);
    j.erase("policy");
    j.erase("lorenz_pre");
    j.erase("lorenz_post");
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(j, "", rows);
    return rows;
}

std::string opt_ratio(const std::optional<Rational>& q) { return q ? format_decimal(*q, kRatioDigits) : "n/a"; }

void write_report_table(std::ostream& out, const MetricsReport& r) {
    auto line = [&](const std::string& label, const std::string& value) {
        out << std::left << std::setw(18) << label << value << '\n';
    };
    line("policy", r.policy_name);
    line("period", std::string(to_string(r.period)));
    line("households", std::to_string(r.households));
    line("income", format_money(r.total_income) + " BGN");
    line("tax assessed", format_money(r.total_tax_assessed) + " BGN");
    line("collection rate", format_rate_fraction(r.collection_rate));
    line("revenue", format_money(r.total_revenue) + " BGN");
    line("gini pre-tax", opt_ratio(r.gini_pre));
    line("gini post-tax", opt_ratio(r.gini_post));
    line("redistribution", opt_ratio(r.redistribution));
    for (const auto& s : r.top_shares)
        line("top " + format_decimal(s.p * 100, 0) + "% share", "pre " + opt_ratio(s.pre) + "  post " + opt_ratio(s.post));
    out << '\n'
        << std::right << std::setw(6) << "decile" << std::setw(12) << "households" << std::setw(18) << "income"
        << std::setw(16) << "tax" << std::setw(14) << "tax/month" << std::setw(12) << "rate" << '\n';
    for (const auto& d : r.deciles) {
        out << std::setw(6) << d.decile << std::setw(12) << d.households << std::setw(18) << format_money(d.income)
            << std::setw(16) << format_money(d.tax) << std::setw(14) << format_money(monthly_equivalent(d.tax, r.period))
            << std::setw(12) << (d.effective_rate ? format_decimal(*d.effective_rate, 4) : "n/a") << '\n';
    }
}

void write_versus_table(std::ostream& out, const WinnersLosers& w) {
    Money net;
    for (const auto& d : w.households) net += d.delta;
    out << w.policy_b << " vs " << w.policy_a << " (" << to_string(w.period) << "): winners " << w.winners
        << ", losers " << w.losers << ", unchanged " << w.unchanged << ", net change " << format_money(net)
        << " BGN\n";
}

enum class Format { table, csv, jsonl };

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "jsonl") return Format::jsonl;
    return Format::table;
}

struct PopulationOptions {
    std::string csv_path;
    std::string synth_spec;
    CLI::Option* csv = nullptr;
    CLI::Option* synth = nullptr;

    void attach(CLI::App* app) {
        csv = app->add_option("--population", csv_path, "Population CSV file");
        synth = app->add_option("--synth", synth_spec, "Synthesize a population, e.g. seed=7,n=1000");
    }

    Population load() const {
        const bool has_csv = csv->count() > 0;
        const bool has_synth = synth->count() > 0;
        if (has_csv == has_synth) throw InvalidInput("exactly one of --population or --synth is required");
        if (has_csv) return load_population_file(csv_path);
        return synthesize(parse_synth_spec(synth_spec));
    }
};

struct PolicyOptions {
    std::vector<std::string> preset_names;
    std::vector<std::string> policy_files;
    CLI::Option* preset = nullptr;
    CLI::Option* file = nullptr;

    void attach(CLI::App* app, bool many) {
        preset = app->add_option("--preset", preset_names, many ? "Preset policy (repeatable)" : "Preset policy");
        file = app->add_option("--policy", policy_files, many ? "Policy file (repeatable)" : "Policy file");
    }

    // Presets and files in command-line order.
    std::vector<Policy> load(const CLI::App* app) const {
        std::vector<Policy> out;
        std::size_t next_preset = 0;
        std::size_t next_file = 0;
        for (const CLI::Option* o : app->parse_order()) {
            if (o == preset) {
                const auto& name = preset_names.at(next_preset++);
                auto p = find_preset(name);
                if (!p) throw InvalidInput("unknown preset '" + name + "'");
                out.push_back(*p);
            } else if (o == file) {
                out.push_back(policy_from_text(read_file(policy_files.at(next_file++))));
            }
        }
        for (const auto& p : out) require_valid(p);
        return out;
    }

    Policy load_one(const CLI::App* app) const {
        auto ps = load(app);
        if (ps.size() != 1) throw InvalidInput("exactly one of --preset or --policy is required");
        return ps.front();
    }
};

void emit_reports(std::ostream& out, Format fmt, const std::vector<MetricsReport>& reports,
                  const std::vector<WinnersLosers>& versus) {
    switch (fmt) {
        case Format::jsonl:
            for (const auto& r : reports) out << report_to_json(r).dump() << '\n';
            for (const auto& w : versus) out << winners_losers_to_json(w).dump() << '\n';
            break;
        case Format::csv:
            out << "policy,metric,value\n";
            for (const auto& r : reports)
                for (const auto& [k, v] : report_rows(r))
                    out << csv_field(r.policy_name) << ',' << k << ',' << csv_field(v) << '\n';
            for (const auto& w : versus) {
                auto j = winners_losers_to_json(w);
                j.erase("households");
                j.erase("policy");
                std::vector<std::pair<std::string, std::string>> rows;
                flatten(j, "versus", rows);
                for (const auto& [k, v] : rows) out << csv_field(w.policy_b) << ',' << k << ',' << csv_field(v) << '\n';
            }
            break;
        case Format::table:
            for (std::size_t i = 0; i < reports.size(); ++i) {
                if (i) out << '\n';
                write_report_table(out, reports[i]);
            }
            if (!versus.empty()) out << '\n';
            for (const auto& w : versus) write_versus_table(out, w);
            break;
    }
}

struct Common {
    std::string format = "table";

    void attach(CLI::App* app) {
        app->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"table", "csv", "jsonl"}))
            ->capture_default_str();
    }
};

std::vector<std::string> split_values(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) out.push_back(cur);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
}

void write_solve(std::ostream& out, Format fmt, const Policy& p, Money target, Money tolerance,
                 const SolveResult& s) {
    auto j = solve_to_json(p.name, target, tolerance, s);
    switch (fmt) {
        case Format::jsonl: out << j.dump() << '\n'; break;
        case Format::csv:
            out << "metric,value\n";
            for (auto& [k, v] : j.items()) out << k << ',' << csv_field(scalar_text(v)) << '\n';
            break;
        case Format::table:
            out << std::left << std::setw(12) << "policy" << p.name << '\n'
                << std::setw(12) << "target" << format_money(target) << " BGN (+/- " << format_money(tolerance)
                << ")\n"
                << std::setw(12) << "scale" << format_scale(s.scale) << '\n'
                << std::setw(12) << "revenue" << format_money(s.revenue) << " BGN\n"
                << std::setw(12) << "iterations" << s.iterations << '\n'
                << std::setw(12) << "interval" << '[' << format_scale(s.bracket_low) << ", "
                << format_scale(s.bracket_high) << "]\n";
            break;
    }
}

}  // namespace

SynthesisParams parse_synth_spec(std::string_view spec) {
    SynthesisParams p;
    bool have_count = false;
    for (const auto& item : split_values(std::string(spec))) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InvalidInput("synthesis option '" + item + "' is not key=value");
        auto key = item.substr(0, eq);
        auto value = item.substr(eq + 1);
        auto to_u64 = [&](std::uint64_t& out) {
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
            if (ec != std::errc{} || ptr != value.data() + value.size())
                throw InvalidInput("invalid synthesis " + key + " '" + value + "'");
        };
        auto to_double = [&]() {
            try {
                std::size_t used = 0;
                double d = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                return d;
            } catch (const std::exception&) {
                throw InvalidInput("invalid synthesis " + key + " '" + value + "'");
            }
        };
        if (key == "seed") {
            std::uint64_t s = 0;
            to_u64(s);
            p.seed = s;
        } else if (key == "n" || key == "households") {
            std::uint64_t n = 0;
            to_u64(n);
            p.household_count = static_cast<std::size_t>(n);
            have_count = true;
        } else if (key == "location") {
            p.income_location = to_double();
        } else if (key == "scale") {
            p.income_scale = to_double();
        } else if (key == "floor") {
            p.income_floor = parse_money(value);
        } else {
            throw InvalidInput("unknown synthesis option '" + key + "'");
        }
    }
    if (!p.seed) throw InvalidInput("synthesis requires seed=<integer>");
    if (!have_count) throw InvalidInput("synthesis requires n=<households>");
    return p;
}

Policy resolve_policy_ref(std::string_view ref) {
    if (auto p = find_preset(ref)) return *p;
    return policy_from_text(read_file(std::string(ref)));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Household tax policy microsimulation", "taxsim"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Evaluate one policy on a population");
    PopulationOptions sim_pop;
    PolicyOptions sim_policy;
    Common sim_common;
    std::string lorenz_csv;
    sim_pop.attach(simulate);
    sim_policy.attach(simulate, false);
    sim_common.attach(simulate);
    simulate->add_option("--lorenz-csv", lorenz_csv, "Write pre/post-tax Lorenz curves to this CSV file");

    auto* cmp = app.add_subcommand("compare", "Evaluate several policies; the first is the baseline");
    PopulationOptions cmp_pop;
    PolicyOptions cmp_policy;
    Common cmp_common;
    cmp_pop.attach(cmp);
    cmp_policy.attach(cmp, true);
    cmp_common.attach(cmp);

    auto* swp = app.add_subcommand("sweep", "Evaluate a policy over values of one parameter");
    PopulationOptions swp_pop;
    PolicyOptions swp_policy;
    Common swp_common;
    std::string param;
    std::string values;
    swp_pop.attach(swp);
    swp_policy.attach(swp, false);
    swp_common.attach(swp);
    swp->add_option("--param", param, "Parameter path, e.g. schedule.brackets[6].rate_bp")->required();
    swp->add_option("--values", values, "Comma-separated values")->required();

    auto* solve = app.add_subcommand("solve", "Find the rate scale that meets a revenue target");
    PopulationOptions solve_pop;
    PolicyOptions solve_policy;
    Common solve_common;
    std::string target_bgn;
    std::string target_policy;
    std::string target_factor;
    std::string tolerance = "1.00";
    solve_pop.attach(solve);
    solve_policy.attach(solve, false);
    solve_common.attach(solve);
    auto* t1 = solve->add_option("--target", target_bgn, "Revenue target in BGN");
    auto* t2 = solve->add_option("--target-policy", target_policy, "Match this policy's revenue (preset or file)");
    auto* t3 = solve->add_option("--target-factor", target_factor, "Multiple of the policy's current revenue");
    t1->excludes(t2)->excludes(t3);
    t2->excludes(t3);
    solve->add_option("--tolerance", tolerance, "Tolerance in BGN")->capture_default_str();

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    std::string listen;
    serve->add_option("--listen", listen, "host:port (default: $TAXSIM_LISTEN or 127.0.0.1:8080)");

    auto* presets = app.add_subcommand("presets", "List preset policies");
    std::string show;
    Common presets_common;
    presets->add_option("--show", show, "Print a preset as an editable policy file");
    presets_common.attach(presets);

    auto* synth = app.add_subcommand("synth", "Write a synthetic population as CSV");
    std::string synth_spec;
    std::string synth_out;
    synth->add_option("--synth", synth_spec, "e.g. seed=7,n=1000")->required();
    synth->add_option("-o,--output", synth_out, "Output file (default: standard output)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (active == simulate) {
            auto policy = sim_policy.load_one(simulate);
            auto pop = sim_pop.load();
            auto report = evaluate(pop, policy);
            if (!lorenz_csv.empty()) write_file(lorenz_csv, lorenz_to_csv(report));
            emit_reports(out, parse_format(sim_common.format), {report}, {});
        } else if (active == cmp) {
            auto policies = cmp_policy.load(cmp);
            if (policies.empty()) throw InvalidInput("compare needs at least one --preset or --policy");
            auto pop = cmp_pop.load();
            auto c = compare(pop, policies);
            emit_reports(out, parse_format(cmp_common.format), c.reports, c.versus_baseline);
        } else if (active == swp) {
            auto policy = swp_policy.load_one(swp);
            auto pop = swp_pop.load();
            auto vals = split_values(values);
            auto points = sweep(pop, policy, param, vals);
            auto fmt = parse_format(swp_common.format);
            if (fmt == Format::jsonl) {
                for (const auto& pt : points) {
                    ordered_json j{{"parameter", param}, {"value", pt.value}, {"report", report_to_json(pt.report)}};
                    out << j.dump() << '\n';
                }
            } else if (fmt == Format::csv) {
                out << "sweep_value,metric,value\n";
                for (const auto& pt : points)
                    for (const auto& [k, v] : report_rows(pt.report))
                        out << csv_field(pt.value) << ',' << k << ',' << csv_field(v) << '\n';
            } else {
                out << param << " on " << policy.name << '\n'
                    << std::left << std::setw(16) << "value" << std::right << std::setw(18) << "revenue"
                    << std::setw(12) << "households" << std::setw(12) << "gini post" << std::setw(16)
                    << "redistribution" << '\n';
                for (const auto& pt : points)
                    out << std::left << std::setw(16) << pt.value << std::right << std::setw(18)
                        << format_money(pt.report.total_revenue) << std::setw(12) << pt.report.households
                        << std::setw(12) << opt_ratio(pt.report.gini_post) << std::setw(16)
                        << opt_ratio(pt.report.redistribution) << '\n';
            }
        } else if (active == solve) {
            auto policy = solve_policy.load_one(solve);
            auto pop = solve_pop.load();
            Money tol = parse_money(tolerance);
            Money target;
            if (t1->count()) {
                target = parse_money(target_bgn);
            } else if (t2->count()) {
                auto other = resolve_policy_ref(target_policy);
                require_valid(other);
                if (other.schedule.period != policy.schedule.period)
                    throw InvalidInput("--target-policy must report in the same period as the solved policy");
                target = revenue(pop, other);
            } else {
                Rational factor = t3->count() ? parse_decimal(target_factor) : Rational(1);
                target = round_money(factor * revenue(pop, policy).stotinki);
            }
            auto s = revenue_neutral_scale(policy, pop, target, tol);
            write_solve(out, parse_format(solve_common.format), policy, target, tol, s);
        } else if (active == serve) {
            auto addr = listen.empty() ? default_listen_address() : parse_listen_address(listen);
            Service service;
            HttpServer server(service);
            int port = server.start(addr);
            err << "listening on " << addr.host << ':' << port << std::endl;
            server.wait();
        } else if (active == presets) {
            if (!show.empty()) {
                auto p = find_preset(show);
                if (!p) throw InvalidInput("unknown preset '" + show + "'");
                out << policy_to_text(*p);
                return kExitOk;
            }
            auto fmt = parse_format(presets_common.format);
            auto pack = preset_pack();
            if (fmt == Format::jsonl) {
                for (const auto& p : pack) out << policy_to_json(p).dump() << '\n';
            } else if (fmt == Format::csv) {
                out << "name,household_mode,period,mode,brackets,collection_rate\n";
                for (const auto& p : pack)
                    out << p.name << ',' << to_string(p.household_mode) << ',' << to_string(p.schedule.period) << ','
                        << to_string(p.schedule.mode) << ',' << p.schedule.brackets.size() << ','
                        << format_rate_fraction(p.collection_rate) << '\n';
            } else {
                for (const auto& p : pack) {
                    out << std::left << std::setw(24) << p.name << std::setw(12) << to_string(p.household_mode)
                        << std::setw(9) << to_string(p.schedule.period) << std::setw(10)
                        << to_string(p.schedule.mode);
                    for (const auto& b : p.schedule.brackets)
                        out << ' ' << format_money(b.lower) << ':'
                            << format_decimal(Rational(b.rate.bp, 100), b.rate.bp % 100 ? 2 : 0) << '%';
                    out << '\n';
                }
                out << "\ndemographic presets\n";
                for (const auto& d : demographic_presets()) out << "  " << d.year << "  " << d.population_count << '\n';
            }
        } else if (active == synth) {
            auto text = export_population(synthesize(parse_synth_spec(synth_spec)));
            if (synth_out.empty())
                out << text;
            else
                write_file(synth_out, text);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        if (std::string_view(e.what()).find("exactly one of") != std::string_view::npos) err << active->help();
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    out.flush();
    return kExitOk;
}

}  // namespace taxsim
