#include "tfe/errors.hpp"
#include "tfe/planner.hpp"
#include "tfe/serialize.hpp"
#include "tfe/service/server.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path data_dir() {
    const char* v = std::getenv("TFE_DATA_DIR");
    return (v && *v) ? fs::path(v) : fs::path();
}

// Relative paths that do not exist locally are looked up under $TFE_DATA_DIR.
fs::path resolve(const std::string& path) {
    const fs::path p(path);
    if (p.empty() || fs::exists(p) || p.is_absolute()) return p;
    const fs::path root = data_dir();
    if (!root.empty() && fs::exists(root / p)) return root / p;
    return p;
}

void emit(const json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out);
    f << j.dump(2) << '\n';
    if (!f) throw tfe::BadValue("cannot write " + out);
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
    if (parts.size() == 1) return parts;
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
        throw tfe::BadValue("grid must be start:stop:step, got " + spec);
    const int n = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(std::round((parts[0] + i * parts[2]) * 1e9) / 1e9);
    return out;
}

std::vector<tfe::Method> parse_methods(const std::string& spec) {
    std::vector<tfe::Method> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tfe::parse_method(tok));
    return out;
}

struct PlanInputs {
    std::string config, players, clubs, coeffs;
};

tfe::DatasetBundle load_inputs(const PlanInputs& in) {
    tfe::DatasetBundle b;
    const fs::path players = resolve(in.players);
    const fs::path clubs = in.clubs.empty() ? players.parent_path() / "clubs.csv" : resolve(in.clubs);
    b.data = tfe::build_dataset(tfe::load_player_table(players), tfe::load_club_table(clubs));
    b.coeffs = tfe::load_coefficients(resolve(in.coeffs));
    b.scenario = tfe::read_json_file(resolve(in.config));
    return b;
}

int run_plan_cmd(const PlanInputs& in, const std::string& out, std::optional<std::uint64_t> seed,
                 const std::string& method) {
    tfe::DatasetBundle b = load_inputs(in);
    json scenario_json = *b.scenario;
    if (seed) scenario_json["solver"]["seed"] = *seed;
    if (!method.empty()) scenario_json["solver"]["method"] = method;
    const tfe::ScenarioConfig scenario = tfe::load_scenario_config(scenario_json);
    const tfe::PlanReport report = tfe::run_plan(b.data, b.coeffs, scenario);
    json j = tfe::to_json(report);
    j["scenario"] = tfe::to_json(scenario);
    emit(j, out);
    const auto& p = report.plan;
    std::cerr << (p.feasible ? "feasible" : "INFEASIBLE") << " plan: " << p.buys.size() << " buys, "
              << p.sells.size() << " sells, cost " << p.breakdown.cost << " M EUR, objective "
              << p.breakdown.raw << '\n';
    return p.feasible ? 0 : 3;
}

int run_auction_cmd(const std::string& setup_path, int rounds, long long n_sim, std::uint64_t seed,
                    std::optional<std::uint64_t> lookup_seed, unsigned threads, const std::string& out,
                    const std::string& lookup_out) {
    if (rounds < 1) throw tfe::BadSetup("--rounds must be >= 1");
    if (n_sim < 1) throw tfe::BadSetup("--nsim must be >= 1");
    tfe::AuctionSpec spec = tfe::auction_spec_from_json(tfe::read_json_file(resolve(setup_path)));
    if (lookup_seed) spec.lookup.seed = *lookup_seed;
    spec.setup.max_rounds = rounds;

    const auto t0 = std::chrono::steady_clock::now();
    const tfe::RoundLookup lookup = rounds == 1 || spec.setup.size() == 1
                                        ? tfe::single_round_lookup(spec.setup)
                                        : tfe::build_lookup(spec.setup, spec.lookup);
    const auto t1 = std::chrono::steady_clock::now();
    const tfe::AuctionStats stats =
        tfe::simulate(spec.setup, lookup, static_cast<std::size_t>(n_sim), seed, rounds, threads);
    const auto t2 = std::chrono::steady_clock::now();

    emit(tfe::to_json(stats), out);
    if (!lookup_out.empty()) emit(tfe::to_json(lookup, true), lookup_out);
    const auto ms = [](auto a, auto b) { return std::chrono::duration<double, std::milli>(b - a).count(); };
    std::cerr << spec.setup.player_id << ": sale " << 100.0 * stats.sale_probability << "% over " << n_sim
              << " paths, " << lookup.entries.size() << " lookup entries (lookup " << ms(t0, t1)
              << " ms, simulate " << ms(t1, t2) << " ms)\n";
    return 0;
}

int run_bench_cmd(const PlanInputs& in, const std::string& methods, const std::string& grid,
                  std::optional<std::uint64_t> seed, const std::string& out) {
    tfe::DatasetBundle b = load_inputs(in);
    json scenario_json = *b.scenario;
    if (seed) scenario_json["solver"]["seed"] = *seed;
    const tfe::ScenarioConfig scenario = tfe::load_scenario_config(scenario_json);
    const tfe::Problem full = tfe::build_problem(b.data, b.coeffs, scenario);
    const std::vector<tfe::Problem> problems{tfe::preprocess(full, scenario.directives)};
    const tfe::DominanceReport rep =
        tfe::compare_solvers(problems, parse_methods(methods), parse_grid(grid), scenario.solver);
    emit(tfe::to_json(rep), out);
    for (std::size_t m = 0; m < rep.methods.size(); ++m)
        std::cerr << tfe::to_string(rep.methods[m]) << ": feasible " << rep.feasible_runs[m] << "/"
                  << rep.lambda3.size() * problems.size() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Football transfer decision engine"};
    app.require_subcommand(1);

    PlanInputs plan_in;
    const std::string default_dataset = "datasets/league60/";
    std::string out, method;
    std::uint64_t seed_value = 42;
    std::optional<std::uint64_t> seed;

    auto* plan = app.add_subcommand("plan", "Optimise a transfer plan for the scenario's focal club");
    plan->add_option("--config", plan_in.config, "Scenario JSON")->required();
    plan->add_option("--players", plan_in.players, "Player table CSV")->required();
    plan->add_option("--coeffs", plan_in.coeffs, "Model coefficients JSON")->required();
    plan->add_option("--clubs", plan_in.clubs, "Club table CSV (default: clubs.csv next to --players)");
    plan->add_option("--out", out, "Output plan JSON (default stdout)");
    plan->add_option("--method", method, "Override solver: ga, sa, hc, brute");
    plan->add_option("--seed", seed, "Solver seed (overrides the scenario)");

    std::string setup, lookup_out;
    int rounds = 5;
    long long n_sim = 2000;
    std::optional<std::uint64_t> lookup_seed;
    unsigned threads = 0;
    auto* auction = app.add_subcommand("auction", "Simulate single- or multi-round auctions");
    auction->add_option("--setup", setup, "Auction setup JSON")->required();
    auction->add_option("--rounds", rounds, "Negotiation rounds T")->capture_default_str();
    auction->add_option("--nsim", n_sim, "Simulated negotiation paths")->capture_default_str();
    auction->add_option("--seed", seed_value, "Simulation seed")->capture_default_str();
    auction->add_option("--lookup-seed", lookup_seed, "Seed for the lookup-table valuation draws");
    auction->add_option("--threads", threads, "Worker threads (0 = all cores)");
    auction->add_option("--out", out, "Output statistics JSON (default stdout)");
    auction->add_option("--lookup-out", lookup_out, "Also write the lookup tables");

    std::string methods = "ga,sa,hc", grid = "0.1:0.9:0.1";
    PlanInputs bench_in{default_dataset + "scenario.json", default_dataset + "players.csv", "",
                        default_dataset + "coefficients.json"};
    auto* bench = app.add_subcommand("bench", "Compare solvers over a lambda3 grid");
    bench->add_option("--methods", methods, "Comma-separated methods")->capture_default_str();
    bench->add_option("--lambda-grid", grid, "start:stop:step for lambda3")->capture_default_str();
    bench->add_option("--config", bench_in.config, "Scenario JSON")->capture_default_str();
    bench->add_option("--players", bench_in.players, "Player table CSV")->capture_default_str();
    bench->add_option("--coeffs", bench_in.coeffs, "Model coefficients JSON")->capture_default_str();
    bench->add_option("--clubs", bench_in.clubs, "Club table CSV");
    bench->add_option("--seed", seed, "Solver seed (overrides the scenario)");
    bench->add_option("--out", out, "Output dominance report JSON (default stdout)");

    std::string host = "127.0.0.1";
    int port = 8080;
    tfe::service::ServiceConfig svc = tfe::service::ServiceConfig::from_env();
    auto* serve = app.add_subcommand("serve", "Run the REST service");
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->capture_default_str();
    serve->add_option("--workers", svc.workers)->capture_default_str();
    serve->add_option("--queue", svc.queue_capacity, "Queued-run capacity before 429")->capture_default_str();
    serve->add_option("--sim-threads", svc.sim_threads, "Threads per auction run (0 = all cores)");
    serve->add_option("--seed", svc.default_seed, "Seed for requests that omit one")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*plan) return run_plan_cmd(plan_in, out, seed, method);
        if (*auction)
            return run_auction_cmd(setup, rounds, n_sim, seed_value, lookup_seed, threads, out, lookup_out);
        if (*bench) return run_bench_cmd(bench_in, methods, grid, seed, out);
        if (*serve) {
            tfe::service::Service service(svc);
            std::cerr << "serving on http://" << host << ":" << port << " (data " << svc.data_dir
                      << ", state " << svc.state_dir << ")\n";
            tfe::service::serve(service, host, port);
        }
    } catch (const tfe::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
