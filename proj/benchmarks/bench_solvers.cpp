#include "tfe/planner.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

namespace {

struct League {
    tfe::Problem problem;
    tfe::Weights weights;
    tfe::SolverParams params;
};

const League& league60() {
    static const League l = [] {
        const auto bundle = tfe::load_dataset_bundle(std::filesystem::path(TFE_SOURCE_DATA_DIR) / "datasets/league60");
        const tfe::ScenarioConfig sc = tfe::load_scenario_config(*bundle.scenario);
        return League{tfe::preprocess(tfe::build_problem(bundle.data, bundle.coeffs, sc), sc.directives),
                      sc.lambda, sc.solver};
    }();
    return l;
}

void BM_Fitness(benchmark::State& state) {
    const League& l = league60();
    const tfe::Decision x = l.problem.status_quo();
    for (auto _ : state) benchmark::DoNotOptimize(tfe::fitness(l.problem, x, l.weights, 1e6));
}
BENCHMARK(BM_Fitness);

void BM_Solve(benchmark::State& state, tfe::Method m) {
    const League& l = league60();
    tfe::SolverParams p = l.params;
    p.method = m;
    for (auto _ : state) benchmark::DoNotOptimize(tfe::solve(l.problem, l.weights, p));
}
BENCHMARK_CAPTURE(BM_Solve, ga, tfe::Method::GA)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, sa, tfe::Method::SA)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, hc, tfe::Method::HC)->Unit(benchmark::kMillisecond);

} // namespace
