#include "support/instances.hpp"
#include "tfe/errors.hpp"
#include "tfe/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tfe;

namespace {

// 20 current players with default-style bounds scaled down, plus four targets.
Problem squad_problem() {
    std::vector<Candidate> pool;
    int id = 0;
    auto add = [&](bool current, Position pos, double rating, LogNormalParams fee) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "S%02d", ++id);
        pool.push_back(make_candidate(buf, current, pos, 25.0 + id % 5, rating, fee));
    };
    for (int k = 0; k < 3; ++k) add(true, Position::GK, 6.4 + 0.1 * k, {0.6, 0.5});
    for (int k = 0; k < 6; ++k) add(true, Position::DF, 6.5 + 0.05 * k, {0.9, 0.5});
    for (int k = 0; k < 6; ++k) add(true, Position::MF, 6.6 + 0.05 * k, {1.0, 0.5});
    for (int k = 0; k < 5; ++k) add(true, Position::FW, 6.7 + 0.05 * k, {1.1, 0.5});
    add(false, Position::FW, 7.2, {1.4, 0.6});
    add(false, Position::MF, 7.0, {1.2, 0.6});
    add(false, Position::DF, 6.9, {1.0, 0.6});
    add(false, Position::GK, 6.8, {0.8, 0.6});
    ConstraintBounds b;
    b.k_tot_max = 22;
    b.k_retain_min = 15;
    b.k_transfer_max = 6;
    b.gk_min = 2;
    b.gk_max = 3;
    b.df_min = 5;
    b.mf_min = 5;
    b.fw_min = 4;
    b.budget_max = 40.0;
    return make_problem(std::move(pool), b);
}

SolverParams quick(Method m, std::uint64_t seed = 42) {
    SolverParams s;
    s.method = m;
    s.seed = seed;
    return s;
}

} // namespace

TEST(Preprocess, KeepDirectivesShrinkRetentionAndSize) {
    const Problem full = squad_problem();
    Directives d;
    for (int k = 0; k < 15; ++k) d.keep.push_back(full.pool[k].player_id);
    const Problem r = preprocess(full, d);
    EXPECT_EQ(r.bounds.k_retain_min, 0);
    EXPECT_EQ(r.bounds.k_tot_max, 22 - 15);
    EXPECT_EQ(r.pool.size(), full.pool.size() - 15);
    EXPECT_EQ(r.fixed.count, 15);
    EXPECT_EQ(r.fixed.transfers, 0);
}

TEST(Preprocess, MustSellLowersProfitFloorAndTransferCap) {
    Problem full = squad_problem();
    full.pool[3].expected_fee = 3.0;
    full.pool[4].expected_fee = 3.0;
    Directives d;
    d.must_sell = {full.pool[3].player_id, full.pool[4].player_id};
    const Problem r = preprocess(full, d);
    EXPECT_DOUBLE_EQ(r.bounds.profit_min, full.bounds.profit_min - 6.0);
    EXPECT_EQ(r.bounds.k_transfer_max, full.bounds.k_transfer_max - 2);
    EXPECT_EQ(r.fixed.transfers, 2);
}

TEST(Preprocess, EmptyDirectivesChangeNothing) {
    const Problem full = squad_problem();
    const Problem r = preprocess(full, {});
    EXPECT_EQ(r.pool.size(), full.pool.size());
    EXPECT_EQ(r.bounds.k_tot_max, full.bounds.k_tot_max);
    EXPECT_EQ(r.bounds.k_retain_min, full.bounds.k_retain_min);
    EXPECT_DOUBLE_EQ(r.bounds.profit_min, full.bounds.profit_min);
    EXPECT_EQ(r.fixed.count, 0);
}

TEST(Preprocess, ReducedObjectiveMatchesExpandedObjective) {
    const Problem full = squad_problem();
    Directives d;
    d.must_buy = {"S21"};
    d.must_sell = {"S01"};
    d.keep = {"S05", "S10"};
    const Problem r = preprocess(full, d);
    const Weights w{0.2, 0.1, 0.7};
    std::mt19937_64 g(8);
    for (int trial = 0; trial < 200; ++trial) {
        Decision x(r.pool.size());
        for (auto& v : x) v = g() & 1u;
        const auto a = fitness(r, x, w, 1e6);
        const auto b = fitness(full, r.expand(x), w, 1e6);
        EXPECT_NEAR(a.cost, b.cost, 1e-9);
        EXPECT_NEAR(a.risk, b.risk, 1e-9);
        EXPECT_NEAR(a.quality, b.quality, 1e-9);
        for (int k = 0; k < kConstraintCount; ++k)
            EXPECT_NEAR(a.violations[k], b.violations[k], 1e-9) << "constraint " << k;
    }
}

TEST(Preprocess, RejectsImpossibleDirectives) {
    const Problem full = squad_problem();
    Directives buy_current;
    buy_current.must_buy = {"S01"};
    EXPECT_THROW(preprocess(full, buy_current), ConflictingDirectives);
    Directives unknown;
    unknown.keep = {"NOPE"};
    EXPECT_THROW(preprocess(full, unknown), BadValue);
    Directives too_many;
    for (int k = 1; k <= 7; ++k) too_many.must_sell.push_back("S" + std::string(k < 10 ? "0" : "") + std::to_string(k));
    EXPECT_THROW(preprocess(full, too_many), InfeasibleAfterFiltering);
}

TEST(Solve, StatusQuoWhenNoTargetsHelp) {
    std::vector<Candidate> pool;
    for (int k = 0; k < 4; ++k)
        pool.push_back(make_candidate("Q" + std::to_string(k), true, kPositions[k], 27, 6.8, {1.0, 0.5}));
    ConstraintBounds b;
    b.k_tot_max = 4;
    b.k_retain_min = 4;
    b.k_transfer_max = 2;
    b.gk_min = 1;
    b.gk_max = 1;
    b.df_min = b.mf_min = b.fw_min = 1;
    b.budget_max = 10.0;
    const Problem p = make_problem(pool, b);
    for (Method m : {Method::GA, Method::SA, Method::HC, Method::Brute}) {
        const TransferPlan plan = solve(p, {0.1, 0.1, 0.8}, quick(m));
        EXPECT_TRUE(plan.feasible) << to_string(m);
        EXPECT_TRUE(plan.buys.empty());
        EXPECT_TRUE(plan.sells.empty());
        EXPECT_EQ(plan.transfers, 0);
    }
}

TEST(Solve, OverConstrainedReportsInfeasibleAfterRerun) {
    Problem p = tfe::testing::small_instance(3);
    // ten required keepers and defenders against a squad cap of nine
    p.bounds.gk_min = 5;
    p.bounds.gk_max = 5;
    p.bounds.df_min = 5;
    const TransferPlan plan = solve(p, {0.1, 0.1, 0.8}, quick(Method::GA));
    EXPECT_FALSE(plan.feasible);
    EXPECT_TRUE(plan.trace.rerun_used);
    EXPECT_GT(plan.breakdown.penalty, 0.0);
}

TEST(BruteForce, RefusesLargePools) {
    const Problem p = tfe::testing::small_instance(1, 19); // 25 candidates
    EXPECT_THROW(brute_force(p, {0.1, 0.1, 0.8}), PoolTooLarge);
}

TEST(Solve, DeterministicForFixedSeed) {
    const Problem p = squad_problem();
    for (Method m : {Method::GA, Method::SA, Method::HC}) {
        const TransferPlan a = solve(p, {0.1, 0.1, 0.8}, quick(m, 9));
        const TransferPlan b = solve(p, {0.1, 0.1, 0.8}, quick(m, 9));
        EXPECT_EQ(a.decision, b.decision) << to_string(m);
        EXPECT_EQ(a.breakdown.fitness, b.breakdown.fitness);
        EXPECT_EQ(a.trace.evaluations, b.trace.evaluations);
    }
}

TEST(GeneticAlgorithm, ElitismKeepsBestNondecreasing) {
    const Problem p = squad_problem();
    const SearchResult r = run_ga(p, {0.1, 0.1, 0.8}, quick(Method::GA, 5));
    ASSERT_GT(r.best_history.size(), 1u);
    for (std::size_t k = 1; k < r.best_history.size(); ++k) EXPECT_GE(r.best_history[k], r.best_history[k - 1]);
}

TEST(Heuristics, CloseToExhaustiveOptimum) {
    int sa_ok = 0, hc_ok = 0, ga_ok = 0;
    for (int k = 0; k < 50; ++k) {
        const Problem p = tfe::testing::small_instance(2000 + k);
        const Weights w = weights_for_lambda3(0.1 + 0.8 * (k % 9) / 8.0);
        const TransferPlan exact = brute_force(p, w);
        auto close = [&](Method m) {
            const TransferPlan h = solve(p, w, quick(m, 100 + k));
            if (!exact.feasible) return !h.feasible;
            if (!h.feasible) return false;
            const double gap = exact.breakdown.raw - h.breakdown.raw;
            return gap <= 0.01 * std::max(1.0, std::abs(exact.breakdown.raw)) + 1e-9;
        };
        sa_ok += close(Method::SA);
        hc_ok += close(Method::HC);
        ga_ok += close(Method::GA);
    }
    EXPECT_GE(sa_ok, 45);
    EXPECT_GE(hc_ok, 45);
    EXPECT_GE(ga_ok, 45);
}

TEST(Ranking, TiesPreferFewerTransfersThenSmallerIds) {
    const Problem p = squad_problem();
    Decision a = p.status_quo(), b = p.status_quo(), c = p.status_quo();
    b[0] = 0;
    c[1] = 0;
    EXPECT_TRUE(preferred(p, a, 1.0, b, 1.0));
    EXPECT_FALSE(preferred(p, b, 1.0, a, 1.0));
    EXPECT_TRUE(preferred(p, b, 1.0, c, 1.0)); // S01 < S02
    EXPECT_TRUE(preferred(p, c, 2.0, a, 1.0));
}

TEST(CompareSolvers, IdenticalMethodsNeverDominate) {
    const std::vector<Problem> probs{tfe::testing::small_instance(11), tfe::testing::small_instance(12)};
    const DominanceReport rep = compare_solvers(probs, {Method::HC, Method::HC}, {0.2, 0.5, 0.8}, quick(Method::HC));
    EXPECT_EQ(rep.records.size(), 2u * 3u * 2u);
    EXPECT_EQ(rep.dominance[0][1], 0);
    EXPECT_EQ(rep.dominance[1][0], 0);
    EXPECT_EQ(rep.feasible_runs[0], rep.feasible_runs[1]);
    EXPECT_THROW(compare_solvers(probs, {Method::GA}, {0.5}, quick(Method::GA)), BadValue);
}

TEST(CompareSolvers, WeightsSplitRemainderEvenly) {
    const Weights w = weights_for_lambda3(0.6);
    EXPECT_DOUBLE_EQ(w.cost, 0.2);
    EXPECT_DOUBLE_EQ(w.risk, 0.2);
    EXPECT_DOUBLE_EQ(w.quality, 0.6);
    EXPECT_THROW(weights_for_lambda3(1.5), BadWeight);
}
