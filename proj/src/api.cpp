#include "taxsim/api.hpp"

#include "taxsim/errors.hpp"
#include "taxsim/lab.hpp"
#include "taxsim/report_json.hpp"

#include <httplib.h>

#include <charconv>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace taxsim {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxSynthHouseholds = 2'000'000;

ApiResponse json_response(int status, const ordered_json& j) { return {status, j.dump()}; }

ApiResponse error_response(int status, std::string_view code, std::string_view message) {
    ordered_json j{{"error", {{"code", code}, {"message", message}}}};
    return json_response(status, j);
}

json parse_body(std::string_view body) {
    try {
        auto j = json::parse(body);
        if (!j.is_object()) throw InvalidInput("request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("request body is not valid JSON: ") + e.what());
    }
}

std::string string_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
    if (!it->is_string()) throw InvalidInput(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

Policy policy_value(const json& v) {
    Policy p;
    if (v.is_string()) {
        auto found = find_preset(v.get<std::string>());
        if (!found) throw NotFound("unknown preset '" + v.get<std::string>() + "'");
        p = *found;
    } else if (v.is_object()) {
        p = policy_from_json(v);
    } else {
        throw InvalidInput("policy must be a preset name or a policy object");
    }
    require_valid(p);
    return p;
}

Policy policy_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
    return policy_value(*it);
}

ordered_json population_summary(const std::string& id, const Population& p) {
    std::size_t members = 0;
    std::size_t adults = 0;
    Money income;
    for (const auto& h : p) {
        members += h.members.size();
        adults += h.adults();
        income += h.monthly_income();
    }
    return {{"population_id", id},
            {"households", p.size()},
            {"members", members},
            {"adults", adults},
            {"children", members - adults},
            {"total_monthly_income_bgn", format_money(income)}};
}

bool looks_like_json(std::string_view body) {
    for (char c : body) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        return c == '{';
    }
    return false;
}

}  // namespace

std::shared_ptr<const Population> Service::population(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = workspace_.find(id);
    if (it == workspace_.end()) throw NotFound("unknown population_id '" + id + "'");
    return it->second;
}

std::string Service::add_population(Population p) {
    auto shared = std::make_shared<const Population>(std::move(p));
    std::unique_lock lock(mutex_);
    std::string id = "p" + std::to_string(next_id_++);
    workspace_.emplace(id, std::move(shared));
    return id;
}

ApiResponse Service::handle(std::string_view method, std::string_view path, std::string_view body) {
    auto route = [&](std::string_view m, std::string_view p) { return path == p && method == m; };
    try {
        if (route("GET", "/api/presets")) {
            ordered_json presets = ordered_json::array();
            for (const auto& p : preset_pack()) presets.push_back(policy_to_json(p));
            ordered_json addons = ordered_json::array();
            for (const auto& a : socialist_addons())
                addons.push_back({{"label", a.label},
                                  {"description", a.description},
                                  {"enabled", a.enabled},
                                  {"schedule", schedule_to_json(a.schedule)}});
            ordered_json demo = ordered_json::array();
            for (const auto& d : demographic_presets())
                demo.push_back({{"year", d.year}, {"population_count", d.population_count}});
            ordered_json refs = ordered_json::array();
            for (const auto& r : reference_top1_shares())
                refs.push_back({{"country", r.country}, {"year", r.year}, {"top1_share", format_decimal(r.top1_share, 4)}});
            return json_response(200, {{"presets", presets},
                                       {"socialist_addons", addons},
                                       {"demographics", demo},
                                       {"reference_top1_shares", refs}});
        }
        if (route("POST", "/api/population")) {
            Population pop;
            if (looks_like_json(body)) {
                auto params = synthesis_from_json(parse_body(body));
                if (params.household_count > kMaxSynthHouseholds)
                    throw InvalidInput("at most " + std::to_string(kMaxSynthHouseholds) + " households per request");
                pop = synthesize(params);
            } else {
                pop = load_population(body);
            }
            auto summary = population_summary("", pop);
            summary["population_id"] = add_population(std::move(pop));
            return json_response(201, summary);
        }
        if (method == "GET" && path.starts_with("/api/population/")) {
            std::string id(path.substr(std::string_view("/api/population/").size()));
            return json_response(200, population_summary(id, *population(id)));
        }
        if (route("POST", "/api/evaluate")) {
            auto req = parse_body(body);
            auto pop = population(string_field(req, "population_id"));
            auto policy = policy_field(req, "policy");
            return json_response(200, report_to_json(evaluate(*pop, policy)));
        }
        if (route("POST", "/api/household/whatif")) {
            auto req = parse_body(body);
            auto it = req.find("household");
            if (it == req.end()) throw InvalidInput("missing field 'household'");
            auto h = household_from_json(*it);
            auto policy = policy_field(req, "policy");
            return json_response(200, breakdown_to_json(household_breakdown(h, policy)));
        }
        if (route("POST", "/api/compare")) {
            auto req = parse_body(body);
            auto pop = population(string_field(req, "population_id"));
            auto it = req.find("policies");
            if (it == req.end() || !it->is_array() || it->empty())
                throw InvalidInput("'policies' must be a non-empty array");
            std::vector<Policy> policies;
            for (const auto& v : *it) policies.push_back(policy_value(v));
            return json_response(200, comparison_to_json(compare(*pop, policies)));
        }
        if (route("POST", "/api/solve")) {
            auto req = parse_body(body);
            auto pop = population(string_field(req, "population_id"));
            auto policy = policy_field(req, "policy");
            Money tol = req.contains("tolerance_bgn") ? parse_money(string_field(req, "tolerance_bgn")) : bgn(1);
            Money target;
            if (req.contains("target_bgn") && req.contains("target_policy"))
                throw InvalidInput("give at most one of 'target_bgn' and 'target_policy'");
            if (req.contains("target_bgn")) {
                target = parse_money(string_field(req, "target_bgn"));
            } else if (req.contains("target_policy")) {
                auto other = policy_field(req, "target_policy");
                if (other.schedule.period != policy.schedule.period)
                    throw InvalidInput("target_policy must report in the same period as policy");
                target = revenue(*pop, other);
            } else {
                target = revenue(*pop, policy);
            }
            auto s = revenue_neutral_scale(policy, *pop, target, tol);
            return json_response(200, solve_to_json(policy.name, target, tol, s));
        }
        if (path.starts_with("/api/")) {
            static const std::string_view known[] = {"/api/presets",  "/api/population", "/api/evaluate",
                                                     "/api/household/whatif", "/api/compare", "/api/solve"};
            for (auto k : known)
                if (path == k) return error_response(405, "method_not_allowed", std::string(method) + " not allowed");
        }
        return error_response(404, "not_found", "no route for " + std::string(method) + " " + std::string(path));
    } catch (const NotFound& e) {
        return error_response(404, "not_found", e.what());
    } catch (const ParseError& e) {
        return error_response(400, "parse_error", e.what());
    } catch (const ValidationError& e) {
        return error_response(400, "validation_error", e.what());
    } catch (const InvalidInput& e) {
        return error_response(400, "invalid_input", e.what());
    } catch (const UnreachableTarget& e) {
        return error_response(422, "unreachable_target", e.what());
    } catch (const SolverError& e) {
        return error_response(422, "solver_error", e.what());
    } catch (const UndefinedMetric& e) {
        return error_response(422, "undefined_metric", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

ListenAddress parse_listen_address(std::string_view text) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos) throw InvalidInput("listen address must be host:port");
    ListenAddress a;
    if (colon > 0) a.host = std::string(text.substr(0, colon));
    auto port = text.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), a.port);
    if (ec != std::errc{} || ptr != port.data() + port.size() || a.port < 0 || a.port > 65535)
        throw InvalidInput("invalid port in listen address '" + std::string(text) + "'");
    return a;
}

ListenAddress default_listen_address() {
    if (const char* env = std::getenv("TAXSIM_LISTEN"); env && *env) return parse_listen_address(env);
    return {};
}

struct HttpServer::Impl {
    explicit Impl(Service& s) : service(s) {}
    Service& service;
    httplib::Server server;
    std::thread thread;
    std::mutex mutex;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        auto r = impl_->service.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    impl_->server.Get(".*", handler);
    impl_->server.Post(".*", handler);
    impl_->server.Put(".*", handler);
    impl_->server.Delete(".*", handler);
}

HttpServer::~HttpServer() {
    stop();
    wait();
}

int HttpServer::start(const ListenAddress& addr) {
    int port = addr.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(addr.host);
        if (port < 0) throw IoError("cannot bind " + addr.host);
    } else if (!impl_->server.bind_to_port(addr.host, port)) {
        throw IoError("cannot bind " + addr.host + ":" + std::to_string(port));
    }
    std::lock_guard lock(impl_->mutex);
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    return port;
}

void HttpServer::wait() {
    std::thread t;
    {
        std::lock_guard lock(impl_->mutex);
        t = std::move(impl_->thread);
    }
    if (t.joinable()) t.join();
}

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace taxsim
