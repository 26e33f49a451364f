#include "tfe/numerics.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_MarlowApprox(benchmark::State& state) {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<tfe::LogNormalParams> c(static_cast<std::size_t>(state.range(0)));
    for (auto& p : c) p = {-2.0 + 5.0 * U(g), 0.1 + 1.4 * U(g)};
    for (auto _ : state) benchmark::DoNotOptimize(tfe::marlow_approx(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MarlowApprox)->Arg(2)->Arg(10)->Arg(50);

void BM_NormalQuantile(benchmark::State& state) {
    double p = 0.001;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tfe::normal_quantile(p));
        p = p < 0.998 ? p + 0.001 : 0.001;
    }
}
BENCHMARK(BM_NormalQuantile);

void BM_BroydenLinear(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) * 4.0 + Eigen::MatrixXd::Constant(n, n, 0.05);
    const Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(tfe::broyden_solve(
            [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(A * x - rhs); }, Eigen::VectorXd::Zero(n)));
}
BENCHMARK(BM_BroydenLinear)->Arg(10)->Arg(80)->Arg(240);

} // namespace
