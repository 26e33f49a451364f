#include "tfe/service/server.hpp"

#include "tfe/errors.hpp"
#include "tfe/planner.hpp"
#include "tfe/serialize.hpp"

#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace tfe::service {
namespace {

using nlohmann::json;

Response error(int status, const std::string& kind, const std::string& message) {
    return {status, {{"error", kind}, {"message", message}}};
}

bool valid_name(const std::string& name) {
    static const std::regex re("[A-Za-z0-9_-]{1,64}");
    return std::regex_match(name, re);
}

std::filesystem::path env_path(const char* var, const char* fallback) {
    const char* v = std::getenv(var);
    return (v && *v) ? std::filesystem::path(v) : std::filesystem::path(fallback);
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    out << text;
    if (!out) throw BadValue("cannot write " + file.string());
}

std::string read_text(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw BadValue("cannot read " + file.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Maps engine and JSON exceptions to 400 responses.
template <class F>
Response guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return error(400, e.kind(), e.what());
    } catch (const json::exception& e) {
        return error(400, "BadRequest", e.what());
    }
}

} // namespace

ServiceConfig ServiceConfig::from_env() {
    ServiceConfig c;
    c.data_dir = env_path("TFE_DATA_DIR", "data");
    c.state_dir = env_path("TFE_STATE_DIR", "tfe-state");
    return c;
}

Service::Service(ServiceConfig cfg) : cfg_(std::move(cfg)), store_(cfg_.state_dir / "runs") {
    std::filesystem::create_directories(cfg_.state_dir / "datasets");
    const unsigned n = std::max(1u, cfg_.workers);
    for (unsigned i = 0; i < n; ++i)
        workers_.emplace_back([this](std::stop_token st) { worker_loop(st); });
}

Service::~Service() {
    for (auto& w : workers_) w.request_stop();
    cv_.notify_all();
    workers_.clear();
}

void Service::worker_loop(std::stop_token st) {
    for (;;) {
        std::pair<std::string, Job> item;
        {
            std::unique_lock lock(mu_);
            if (!cv_.wait(lock, st, [&] { return !queue_.empty(); })) return;
            item = std::move(queue_.front());
            queue_.pop_front();
            ++active_;
        }
        const std::string& id = item.first;
        try {
            store_.mark_running(id);
            store_.complete(id, item.second(id));
        } catch (const Error& e) {
            store_.fail(id, {{"kind", e.kind()}, {"message", e.what()}});
        } catch (const std::exception& e) {
            store_.fail(id, {{"kind", "InternalError"}, {"message", e.what()}});
        }
        {
            std::lock_guard lock(mu_);
            --active_;
        }
        idle_cv_.notify_all();
    }
}

void Service::wait_idle() {
    std::unique_lock lock(mu_);
    idle_cv_.wait(lock, [&] { return queue_.empty() && active_ == 0; });
}

Response Service::enqueue(const std::string& kind, json config, Job job) {
    std::unique_lock lock(mu_);
    if (queue_.size() >= cfg_.queue_capacity)
        return error(429, "QueueFull", "run queue is at capacity, retry later");
    const ScenarioRun run = store_.create(kind, std::move(config));
    queue_.emplace_back(run.run_id, std::move(job));
    lock.unlock();
    cv_.notify_one();
    return {202, {{"run_id", run.run_id}, {"status", "queued"}}};
}

std::filesystem::path Service::dataset_dir(const std::string& name) const {
    if (!valid_name(name)) return {};
    for (const auto& root : {cfg_.state_dir / "datasets", cfg_.data_dir / "datasets"}) {
        const auto dir = root / name;
        if (std::filesystem::exists(dir / "players.csv")) return dir;
    }
    return {};
}

Response Service::create_plan(const json& body) {
    return guarded([&]() -> Response {
        if (!body.is_object()) return error(400, "BadRequest", "body must be a JSON object");
        const std::string name = body.value("dataset", std::string{});
        const auto dir = dataset_dir(name);
        if (dir.empty()) return error(404, "UnknownDataset", "no dataset named '" + name + "'");
        auto bundle = std::make_shared<DatasetBundle>(load_dataset_bundle(dir));

        json scenario_json;
        if (body.contains("scenario")) scenario_json = body.at("scenario");
        else if (bundle->scenario) scenario_json = *bundle->scenario;
        else return error(400, "BadRequest", "no scenario given and dataset has no default");
        if (body.contains("seed")) scenario_json["solver"]["seed"] = body.at("seed");
        else if (!scenario_json.contains("solver") || !scenario_json["solver"].contains("seed"))
            scenario_json["solver"]["seed"] = cfg_.default_seed;

        const ScenarioConfig scenario = load_scenario_config(scenario_json);
        effective_bounds(bundle->data, scenario); // unknown focal club -> 400 now, not later

        json snapshot = {{"dataset", name}, {"scenario", to_json(scenario)}};
        return enqueue("plan", std::move(snapshot), [this, bundle, scenario](const std::string& id) {
            const PlanReport report =
                run_plan(bundle->data, bundle->coeffs, scenario, [&](long done, long total) {
                    store_.set_progress(id, {{"stage", "search"}, {"done", done}, {"total", total}});
                });
            return to_json(report);
        });
    });
}

Response Service::create_auction(const json& body) {
    return guarded([&]() -> Response {
        if (!body.is_object()) return error(400, "BadRequest", "body must be a JSON object");
        json setup_json;
        if (body.contains("setup")) {
            setup_json = body.at("setup");
        } else if (body.contains("fixture")) {
            const std::string name = body.at("fixture").get<std::string>();
            const auto file = cfg_.data_dir / "auctions" / (name + ".json");
            if (!valid_name(name) || !std::filesystem::exists(file))
                return error(404, "UnknownFixture", "no auction fixture named '" + name + "'");
            setup_json = read_json_file(file);
        } else {
            return error(400, "BadRequest", "body needs 'setup' or 'fixture'");
        }
        AuctionSpec spec = auction_spec_from_json(setup_json);
        const int rounds = body.value("rounds", spec.setup.max_rounds);
        const long long n_sim = body.value("n_sim", 2000LL);
        const std::uint64_t seed = body.value("seed", cfg_.default_seed);
        if (rounds < 1) return error(400, "BadSetup", "rounds must be >= 1");
        if (n_sim < 1) return error(400, "BadSetup", "n_sim must be >= 1");
        if (body.contains("lookup_seed")) spec.lookup.seed = body.at("lookup_seed").get<std::uint64_t>();
        spec.setup.max_rounds = rounds;

        json snapshot = {{"setup", to_json(spec.setup, spec.lookup)},
                         {"rounds", rounds},
                         {"n_sim", n_sim},
                         {"seed", seed}};
        const unsigned threads = cfg_.sim_threads;
        return enqueue("auction", std::move(snapshot),
                       [this, spec, rounds, n_sim, seed, threads](const std::string& id) {
                           store_.set_progress(id, {{"stage", "lookup"}});
                           const RoundLookup lookup = rounds == 1 || spec.setup.size() == 1
                                                          ? single_round_lookup(spec.setup)
                                                          : build_lookup(spec.setup, spec.lookup);
                           const AuctionStats stats = simulate(
                               spec.setup, lookup, static_cast<std::size_t>(n_sim), seed, rounds, threads,
                               [&](std::size_t done, std::size_t total) {
                                   store_.set_progress(id, {{"stage", "simulate"}, {"done", done}, {"total", total}});
                               });
                           return json{{"stats", to_json(stats)}, {"lookup", to_json(lookup)}};
                       });
    });
}

Response Service::get_run(const std::string& run_id) const {
    const auto run = store_.get(run_id);
    if (!run) return error(404, "UnknownRun", "no run with id '" + run_id + "'");
    return {200, to_json(*run)};
}

Response Service::list_datasets() const {
    json out = json::array();
    std::set<std::string> seen;
    const std::pair<std::filesystem::path, const char*> roots[] = {
        {cfg_.state_dir / "datasets", "uploaded"}, {cfg_.data_dir / "datasets", "bundled"}};
    for (const auto& [root, source] : roots) {
        if (!std::filesystem::is_directory(root)) continue;
        std::vector<std::string> names;
        for (const auto& e : std::filesystem::directory_iterator(root))
            if (e.is_directory() && std::filesystem::exists(e.path() / "players.csv"))
                names.push_back(e.path().filename().string());
        std::sort(names.begin(), names.end());
        for (const auto& n : names)
            if (seen.insert(n).second) out.push_back({{"name", n}, {"source", source}});
    }
    json auctions = json::array();
    if (std::filesystem::is_directory(cfg_.data_dir / "auctions")) {
        std::vector<std::string> names;
        for (const auto& e : std::filesystem::directory_iterator(cfg_.data_dir / "auctions"))
            if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
        std::sort(names.begin(), names.end());
        auctions = names;
    }
    return {200, {{"datasets", out}, {"auction_fixtures", auctions}}};
}

Response Service::upload_dataset(const json& body) {
    return guarded([&]() -> Response {
        if (!body.is_object()) return error(400, "BadRequest", "body must be a JSON object");
        const std::string name = body.value("name", std::string{});
        const std::string base = body.value("base", std::string{});
        if (!body.contains("players_csv")) return error(400, "BadRequest", "players_csv is required");
        const std::string players = body.at("players_csv").get<std::string>();

        std::string clubs;
        json coeffs;
        std::filesystem::path base_dir;
        if (!base.empty()) {
            base_dir = dataset_dir(base);
            if (base_dir.empty()) return error(404, "UnknownDataset", "no dataset named '" + base + "'");
        }
        if (body.contains("clubs_csv")) clubs = body.at("clubs_csv").get<std::string>();
        else if (!base_dir.empty()) clubs = read_text(base_dir / "clubs.csv");
        else return error(400, "BadRequest", "clubs_csv or base dataset required");
        if (body.contains("coefficients")) coeffs = body.at("coefficients");
        else if (!base_dir.empty()) coeffs = read_json_file(base_dir / "coefficients.json");
        else return error(400, "BadRequest", "coefficients or base dataset required");

        if (!valid_name(name)) return error(400, "BadRequest", "dataset name must match [A-Za-z0-9_-]{1,64}");
        if (!dataset_dir(name).empty()) return error(409, "DatasetExists", "dataset '" + name + "' already exists");

        std::istringstream pin(players), cin(clubs);
        const Dataset data = build_dataset(load_player_table(pin), load_club_table(cin));
        load_coefficients(coeffs);

        const auto dir = cfg_.state_dir / "datasets" / name;
        const auto tmp = cfg_.state_dir / "datasets" / ("." + name + ".tmp");
        std::filesystem::remove_all(tmp);
        std::filesystem::create_directories(tmp);
        write_text(tmp / "players.csv", players);
        write_text(tmp / "clubs.csv", clubs);
        write_text(tmp / "coefficients.json", coeffs.dump(2));
        if (!base_dir.empty() && std::filesystem::exists(base_dir / "scenario.json"))
            std::filesystem::copy_file(base_dir / "scenario.json", tmp / "scenario.json");
        std::filesystem::rename(tmp, dir);
        return {201, {{"name", name}, {"players", data.players.size()}, {"clubs", data.clubs.size()}}};
    });
}

Response Service::upload_dataset_csv(const std::string& name, const std::string& base,
                                     const std::string& players_csv) {
    return upload_dataset(
        {{"name", name}, {"base", base.empty() ? std::string("league60") : base}, {"players_csv", players_csv}});
}

void serve(Service& service, const std::string& host, int port) {
    httplib::Server srv;
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto parse = [](const httplib::Request& req) {
        try {
            return json::parse(req.body);
        } catch (const json::exception&) {
            return json();
        }
    };

    srv.Post("/api/plans", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.create_plan(parse(req)));
    });
    srv.Post("/api/auctions", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.create_auction(parse(req)));
    });
    srv.Get(R"(/api/runs/([A-Za-z0-9_-]+))", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.get_run(req.matches[1]));
    });
    srv.Get("/api/datasets", [&](const httplib::Request&, httplib::Response& res) {
        reply(res, service.list_datasets());
    });
    srv.Post("/api/datasets", [&](const httplib::Request& req, httplib::Response& res) {
        const std::string type = req.get_header_value("Content-Type");
        if (type.rfind("text/csv", 0) == 0)
            reply(res, service.upload_dataset_csv(req.get_param_value("name"), req.get_param_value("base"),
                                                  req.body));
        else
            reply(res, service.upload_dataset(parse(req)));
    });

    if (!srv.listen(host, port)) throw BadValue("cannot listen on " + host + ":" + std::to_string(port));
}

} // namespace tfe::service
