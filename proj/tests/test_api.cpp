#include <doctest.h>

#include "taxsim/api.hpp"
#include "taxsim/errors.hpp"
#include "taxsim/policy.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

using namespace taxsim;
using nlohmann::json;

namespace {

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kFixtures = TAXSIM_FIXTURES;
const std::string kGolden = TAXSIM_GOLDEN;

std::string load(Service& s, const std::string& body) {
    auto r = s.handle("POST", "/api/population", body);
    REQUIRE(r.status == 201);
    return json::parse(r.body)["population_id"].get<std::string>();
}

json post(Service& s, const std::string& path, const json& body, int expected = 200) {
    auto r = s.handle("POST", path, body.dump());
    CHECK_MESSAGE(r.status == expected, r.body);
    return json::parse(r.body);
}

json family_json() {
    json adult = {{"role", "adult"}, {"monthly_income_bgn", "600.00"}};
    json child = {{"role", "child"}};
    auto first = adult;
    first["claims"] = {{"children", 3}};
    return {{"id", "fam"}, {"members", {first, adult, child, child, child}}};
}

}  // namespace

TEST_CASE("evaluate matches the CLI golden reports") {
    Service s;
    auto id = load(s, slurp(kFixtures + "/small_town.csv"));
    CHECK(id == "p1");
    for (std::string p : {"flat_2008", "nit_2016", "proposed_progressive"}) {
        auto r = s.handle("POST", "/api/evaluate", json{{"population_id", id}, {"policy", p}}.dump());
        CHECK(r.status == 200);
        CHECK(r.body + "\n" == slurp(kGolden + "/small_town_" + p + ".jsonl"));
    }
    // inline policy objects work too
    auto inline_policy = json::parse(policy_to_text(preset_nit_2016()));
    auto r = s.handle("POST", "/api/evaluate", json{{"population_id", id}, {"policy", inline_policy}}.dump());
    CHECK(r.body + "\n" == slurp(kGolden + "/small_town_nit_2016.jsonl"));
}

TEST_CASE("population endpoint") {
    Service s;
    auto summary = json::parse(s.handle("POST", "/api/population", slurp(kFixtures + "/family.csv")).body);
    CHECK(summary["households"] == 1);
    CHECK(summary["members"] == 5);
    CHECK(summary["children"] == 3);
    CHECK(summary["total_monthly_income_bgn"] == "1200.00");

    auto synth = post(s, "/api/population", json{{"seed", 7}, {"households", 100}}, 201);
    CHECK(synth["population_id"] == "p2");
    CHECK(synth["households"] == 100);
    CHECK(json::parse(s.handle("GET", "/api/population/p2", "").body)["households"] == 100);

    auto bad = s.handle("POST", "/api/population", "person_id,x\n");
    CHECK(bad.status == 400);
    CHECK(json::parse(bad.body)["error"]["code"] == "parse_error");
    CHECK(post(s, "/api/population", json{{"households", 5}}, 400)["error"]["code"] == "invalid_input");
    CHECK(s.handle("GET", "/api/population/p9", "").status == 404);
}

TEST_CASE("whatif itemizes the NIT transfer") {
    Service s;
    auto b = post(s, "/api/household/whatif", json{{"household", family_json()}, {"policy", "nit_2016"}});
    CHECK(b["tax_bgn"] == "-300.00");
    CHECK(b["nit"]["transfer_bgn"] == "300.00");
    CHECK(b["nit"]["minimum_bgn"] == "1500.00");

    auto flat = post(s, "/api/household/whatif", json{{"household", family_json()}, {"policy", "flat_2008"}});
    CHECK(flat["period"] == "annual");
    CHECK(flat["tax_bgn"] == "1380.00");
    CHECK(flat["monthly_tax_bgn"] == "115.00");
    CHECK(flat["members"][0]["reliefs"]["children_bgn"] == "600.00");

    auto prog = post(s, "/api/household/whatif",
                     json{{"household", family_json()}, {"policy", json::parse(policy_to_text(
                                                                      preset_proposed_progressive(ApplicationMode::marginal)))}});
    // 300 x 0 % + 300 x 10 % per adult
    CHECK(prog["tax_bgn"] == "60.00");
    CHECK(prog["members"][0]["brackets"].size() == 2);

    json empty = {{"members", json::array()}};
    CHECK(post(s, "/api/household/whatif", json{{"household", empty}, {"policy", "nit_2016"}}, 400)["error"]["code"] ==
          "invalid_input");
}

TEST_CASE("compare and solve") {
    Service s;
    auto id = load(s, slurp(kFixtures + "/family.csv"));
    auto c = post(s, "/api/compare", json{{"population_id", id}, {"policies", {"flat_2008", "nit_2016"}}});
    CHECK(c["reports"].size() == 2);
    CHECK(c["versus_baseline"][0]["households"][0]["delta_bgn"] == "-415.00");

    auto pid = post(s, "/api/population", json{{"seed", 3}, {"households", 300}}, 201)["population_id"];
    auto solved = post(s, "/api/solve", json{{"population_id", pid}, {"policy", "flat_2008"}});
    CHECK(std::stod(solved["scale"].get<std::string>()) == doctest::Approx(1.0).epsilon(1e-6));

    auto unreachable = post(s, "/api/solve",
                            json{{"population_id", pid}, {"policy", "flat_2008"}, {"target_bgn", "999999999.00"}}, 422);
    CHECK(unreachable["error"]["code"] == "unreachable_target");
}

TEST_CASE("error statuses") {
    Service s;
    CHECK(post(s, "/api/evaluate", json{{"population_id", "p42"}, {"policy", "flat_2008"}}, 404)["error"]["code"] ==
          "not_found");
    auto id = load(s, slurp(kFixtures + "/family.csv"));
    CHECK(s.handle("POST", "/api/evaluate", "{not json").status == 400);
    CHECK(post(s, "/api/evaluate", json{{"population_id", id}}, 400)["error"]["message"] == "missing field 'policy'");
    CHECK(post(s, "/api/evaluate", json{{"population_id", id}, {"policy", "flat_1990"}}, 404)["error"]["code"] ==
          "not_found");
    auto broken = json::parse(policy_to_text(preset_flat_2008()));
    broken["schedule"]["brackets"][0]["lower_bgn"] = "5.00";
    CHECK(post(s, "/api/evaluate", json{{"population_id", id}, {"policy", broken}}, 400)["error"]["code"] ==
          "invalid_input");
    CHECK(s.handle("GET", "/api/nothing", "").status == 404);
    CHECK(s.handle("GET", "/api/evaluate", "").status == 405);
}

TEST_CASE("presets endpoint") {
    Service s;
    auto r = s.handle("GET", "/api/presets", "");
    REQUIRE(r.status == 200);
    auto j = json::parse(r.body);
    CHECK(j["presets"].size() == 4);
    CHECK(policy_from_json(j["presets"][2]) == preset_nit_2016());
    CHECK(j["demographics"][0]["population_count"] == 7168009);
    CHECK(j["reference_top1_shares"][1]["top1_share"] == "0.1700");
}

TEST_CASE("concurrent registration and evaluation") {
    Service s;
    auto id = load(s, slurp(kFixtures + "/small_town.csv"));
    const auto golden = slurp(kGolden + "/small_town_flat_2008.jsonl");
    std::atomic<int> mismatches{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 10; ++i) {
                if (t % 2) {
                    s.handle("POST", "/api/population", json{{"seed", t * 100 + i}, {"households", 20}}.dump());
                } else {
                    auto r = s.handle("POST", "/api/evaluate", json{{"population_id", id}, {"policy", "flat_2008"}}.dump());
                    if (r.body + "\n" != golden) ++mismatches;
                }
            }
        });
    }
    for (auto& th : threads) th.join();
    CHECK(mismatches == 0);
    CHECK(s.handle("GET", "/api/population/p41", "").status == 200);
    CHECK(s.handle("GET", "/api/population/p42", "").status == 404);
}

TEST_CASE("listen addresses") {
    CHECK(parse_listen_address("0.0.0.0:9000").port == 9000);
    CHECK(parse_listen_address(":8081").host == "127.0.0.1");
    CHECK_THROWS_AS(parse_listen_address("localhost"), InvalidInput);
    CHECK_THROWS_AS(parse_listen_address("h:70000"), InvalidInput);
}

TEST_CASE("HTTP smoke test") {
    Service s;
    HttpServer server(s);
    int port = server.start({"127.0.0.1", 0});
    REQUIRE(port > 0);
    httplib::Client client("127.0.0.1", port);
    auto presets = client.Get("/api/presets");
    REQUIRE(presets);
    CHECK(presets->status == 200);
    CHECK(json::parse(presets->body)["presets"].size() == 4);

    auto pop = client.Post("/api/population", slurp(kFixtures + "/family.csv"), "text/csv");
    REQUIRE(pop);
    CHECK(pop->status == 201);
    auto eval = client.Post("/api/evaluate", json{{"population_id", "p1"}, {"policy", "nit_2016"}}.dump(),
                            "application/json");
    REQUIRE(eval);
    CHECK(eval->body + "\n" == slurp(kGolden + "/family_nit_2016.jsonl"));
    auto missing = client.Post("/api/evaluate", json{{"population_id", "p7"}, {"policy", "nit_2016"}}.dump(),
                               "application/json");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    server.stop();
    server.wait();
}
