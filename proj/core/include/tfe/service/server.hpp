#pragma once
#include "tfe/service/run_store.hpp"

#include <nlohmann/json.hpp>

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace tfe::service {

struct ServiceConfig {
    std::filesystem::path data_dir;  // bundled datasets/ and auctions/ fixtures (read-only)
    std::filesystem::path state_dir; // runs/ and uploaded datasets/
    unsigned workers = 2;
    std::size_t queue_capacity = 16;
    unsigned sim_threads = 0; // per auction run; 0 = hardware concurrency
    std::uint64_t default_seed = 42; // for requests that carry no seed

    // TFE_DATA_DIR and TFE_STATE_DIR, with ./data and ./tfe-state as fallbacks.
    static ServiceConfig from_env();
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

// Transport-independent request handling; the HTTP layer only maps routes.
class Service {
public:
    explicit Service(ServiceConfig cfg);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    Response create_plan(const nlohmann::json& body);
    Response create_auction(const nlohmann::json& body);
    Response get_run(const std::string& run_id) const;
    Response list_datasets() const;
    // JSON body {name, players_csv, clubs_csv?, coefficients?, base?} or a raw
    // CSV players table with name/base given separately.
    Response upload_dataset(const nlohmann::json& body);
    Response upload_dataset_csv(const std::string& name, const std::string& base,
                                const std::string& players_csv);

    // Blocks until no run is queued or executing.
    void wait_idle();
    const ServiceConfig& config() const { return cfg_; }
    RunStore& store() { return store_; }

private:
    using Job = std::function<nlohmann::json(const std::string& run_id)>;
    Response enqueue(const std::string& kind, nlohmann::json config, Job job);
    void worker_loop(std::stop_token st);
    std::filesystem::path dataset_dir(const std::string& name) const;

    ServiceConfig cfg_;
    RunStore store_;
    std::mutex mu_;
    std::condition_variable_any cv_;
    std::condition_variable_any idle_cv_;
    std::deque<std::pair<std::string, Job>> queue_;
    std::size_t active_ = 0;
    std::vector<std::jthread> workers_;
};

// Runs the HTTP server until the process is stopped.
void serve(Service& service, const std::string& host, int port);

} // namespace tfe::service
