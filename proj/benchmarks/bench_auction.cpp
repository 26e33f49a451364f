#include "tfe/serialize.hpp"
#include "tfe/simulation.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>

namespace {

tfe::AuctionSpec fixture(const char* name) {
    const std::filesystem::path dir = TFE_SOURCE_DATA_DIR;
    return tfe::auction_spec_from_json(tfe::read_json_file(dir / "auctions" / (std::string(name) + ".json")));
}

void BM_SolveRoundOne(benchmark::State& state, const char* name) {
    const tfe::AuctionSpec spec = fixture(name);
    for (auto _ : state) benchmark::DoNotOptimize(tfe::solve_round_one(spec.setup));
}
BENCHMARK_CAPTURE(BM_SolveRoundOne, almiron, "almiron")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolveRoundOne, traore, "traore")->Unit(benchmark::kMillisecond);

void BM_BuildLookup(benchmark::State& state) {
    const tfe::AuctionSpec spec = fixture("almiron");
    for (auto _ : state) benchmark::DoNotOptimize(tfe::build_lookup(spec.setup, spec.lookup));
}
BENCHMARK(BM_BuildLookup)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_Simulate(benchmark::State& state) {
    const tfe::AuctionSpec spec = fixture("almiron");
    const tfe::RoundLookup lookup = tfe::build_lookup(spec.setup, spec.lookup);
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(tfe::simulate(spec.setup, lookup, 2000, 42, 5, threads));
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace
