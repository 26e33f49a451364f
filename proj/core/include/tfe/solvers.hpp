#pragma once
#include "tfe/objective.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace tfe {

// (completed, total) — generations for GA, steps for SA/HC.
using ProgressFn = std::function<void(long, long)>;

struct PlanEntry {
    std::string player_id;
    double expected_fee = 0.0;
    double fee_q25 = 0.0; // fee interquartile range, buys only
    double fee_q75 = 0.0;
};

struct SolverTrace {
    Method method = Method::GA;
    int iterations = 0;
    long evaluations = 0;
    bool rerun_used = false;
    std::uint64_t seed = 0;
};

struct TransferPlan {
    std::map<std::string, bool> decision; // over the unreduced pool
    std::vector<PlanEntry> buys;
    std::vector<PlanEntry> sells;
    ObjectiveBreakdown breakdown; // re-evaluated on the unreduced problem
    bool feasible = false;
    bool normalized = false;
    int transfers = 0;
    int squad_size = 0;
    SolverTrace trace;
};

struct SearchResult {
    Decision x;
    ObjectiveBreakdown score;
    int iterations = 0;
    long evaluations = 0;
    std::vector<double> best_history; // best penalized fitness after each generation/step
};

// Removes directive players from the decision set and adjusts bounds.
Problem preprocess(const Problem& full, const Directives& directives);

SearchResult run_ga(const Problem& p, const Weights& w, const SolverParams& params,
                    const ProgressFn& progress = {});
SearchResult run_sa(const Problem& p, const Weights& w, const SolverParams& params,
                    const ProgressFn& progress = {});
SearchResult run_hc(const Problem& p, const Weights& w, const SolverParams& params,
                    const ProgressFn& progress = {});

// Heuristic search, feasibility re-check on the unreduced problem and a
// single rerun with doubled iterations if the first result is infeasible.
TransferPlan solve(const Problem& p, const Weights& w, const SolverParams& params,
                   const ProgressFn& progress = {});

inline constexpr std::size_t kBruteForceLimit = 24;
TransferPlan brute_force(const Problem& p, const Weights& w);

TransferPlan make_plan(const Problem& p, const Decision& x, const Weights& w, double beta,
                       const SolverTrace& trace);

// True if a is preferred to b: higher fitness, then fewer transfers, then
// the lexicographically smaller set of transferred player ids.
bool preferred(const Problem& p, const Decision& a, double fa, const Decision& b, double fb);

struct BenchRecord {
    std::size_t instance = 0;
    Method method = Method::GA;
    double lambda3 = 0.0;
    bool feasible = false;
    double cost = 0.0;
    double normalized_cost = 0.0;
    double mean_rating = 0.0;
    double rating_improvement = 0.0;
    double wall_ms = 0.0;
    long evaluations = 0;
};

struct DominanceReport {
    std::vector<Method> methods;
    std::vector<double> lambda3;
    std::vector<BenchRecord> records;
    std::vector<std::vector<int>> dominance; // [a][b]: runs where a dominates b
    std::vector<std::vector<int>> shared;    // [a][b]: shared feasible runs
    std::vector<int> feasible_runs;          // per method
};

// lambda1 = lambda2 = (1 - lambda3) / 2 for every grid value.
Weights weights_for_lambda3(double lambda3);

DominanceReport compare_solvers(const std::vector<Problem>& problems,
                                const std::vector<Method>& methods,
                                const std::vector<double>& lambda3_grid, const SolverParams& base);

} // namespace tfe
