#pragma once

// HTTP API over an in-memory population workspace. Populations live until
// the process exits; restarting the service loses them.
//
//   GET  /api/presets
//   POST /api/population         CSV body, or JSON synthesis parameters
//   GET  /api/population/{id}    summary of a loaded population
//   POST /api/evaluate           {population_id, policy}
//   POST /api/household/whatif   {household, policy}
//   POST /api/compare            {population_id, policies: [...]}
//   POST /api/solve              {population_id, policy, target_bgn | target_policy, tolerance_bgn}
//
// `policy` is a preset name or a policy object. Errors are
// {"error": {"code", "message"}}: 400 for malformed or invalid input, 404
// for unknown population ids and preset names, 422 when the solver cannot
// meet the target.

#include "taxsim/population.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>

namespace taxsim {

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

class Service {
public:
    ApiResponse handle(std::string_view method, std::string_view path, std::string_view body);

    std::shared_ptr<const Population> population(const std::string& id) const;
    std::string add_population(Population p);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const Population>> workspace_;
    std::uint64_t next_id_ = 1;
};

struct ListenAddress {
    std::string host = "127.0.0.1";
    int port = 8080;
};

/// "host:port" or ":port". Throws InvalidInput.
ListenAddress parse_listen_address(std::string_view text);
/// TAXSIM_LISTEN if set, else 127.0.0.1:8080.
ListenAddress default_listen_address();

/// Serves `service` over HTTP on a background thread.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds and starts listening; port 0 picks a free port. Returns the
    /// bound port. Throws IoError when binding fails.
    int start(const ListenAddress& addr);
    /// Blocks until stop() is called from another thread.
    void wait();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace taxsim
