#include "tfe/solvers.hpp"

#include "tfe/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace tfe {
namespace {

// Orders decisions by fitness, then transfers, then transferred ids.
class Ranker {
public:
    explicit Ranker(const Problem& p) : sq_(p.status_quo()), order_(p.pool.size()) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return p.pool[a].player_id < p.pool[b].player_id;
        });
    }

    int transfers(const Decision& x) const {
        int n = 0;
        for (std::size_t i = 0; i < x.size(); ++i) n += x[i] != sq_[i];
        return n;
    }

    bool better(const Decision& a, double fa, const Decision& b, double fb) const {
        if (fa != fb) return fa > fb;
        const int ta = transfers(a), tb = transfers(b);
        if (ta != tb) return ta < tb;
        // The first id (in sorted order) where the transfer sets differ
        // belongs to the lexicographically smaller list.
        for (std::size_t i : order_) {
            const bool in_a = a[i] != sq_[i], in_b = b[i] != sq_[i];
            if (in_a != in_b) return in_a;
        }
        return false;
    }

    const Decision& status_quo() const { return sq_; }

private:
    Decision sq_;
    std::vector<std::size_t> order_;
};

struct Evaluator {
    const Problem& p;
    const Weights& w;
    double beta;
    long count = 0;

    ObjectiveBreakdown operator()(const Decision& x) {
        ++count;
        return fitness(p, x, w, beta);
    }
};

void flip_random(Decision& x, int k, std::mt19937_64& rng) {
    const int n = static_cast<int>(x.size());
    k = std::min(k, n);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < k; ++j) {
        std::uniform_int_distribution<int> pick(j, n - 1);
        std::swap(idx[j], idx[pick(rng)]);
        x[idx[j]] ^= 1;
    }
}

int perturbation_cap(const Problem& p) {
    return std::clamp(p.bounds.k_transfer_max, 1, std::max(1, static_cast<int>(p.pool.size())));
}

SearchResult trivial_result(const Problem& p, Evaluator& eval) {
    SearchResult r;
    r.x = p.status_quo();
    r.score = eval(r.x);
    r.evaluations = eval.count;
    r.best_history.push_back(r.score.fitness);
    return r;
}

SearchResult dispatch(const Problem& p, const Weights& w, const SolverParams& params,
                      const ProgressFn& progress) {
    switch (params.method) {
    case Method::GA: return run_ga(p, w, params, progress);
    case Method::SA: return run_sa(p, w, params, progress);
    case Method::HC: return run_hc(p, w, params, progress);
    case Method::Brute: break;
    }
    throw BadValue("brute force is not a heuristic backend");
}

} // namespace

bool preferred(const Problem& p, const Decision& a, double fa, const Decision& b, double fb) {
    return Ranker(p).better(a, fa, b, fb);
}

Problem preprocess(const Problem& full, const Directives& d) {
    if (full.parent) throw BadValue("preprocess expects an unreduced problem");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < full.pool.size(); ++i) index.emplace(full.pool[i].player_id, i);

    auto find = [&](const std::string& id) {
        const auto it = index.find(id);
        if (it == index.end()) throw BadValue("directive names unknown player " + id);
        return it->second;
    };

    Problem r;
    r.bounds = full.bounds;
    r.squad = full.squad;
    r.normalize = full.normalize;
    r.cost_scale = full.cost_scale;
    r.quality_scale = full.quality_scale;
    ConstraintBounds& b = r.bounds;
    FixedPart& f = r.fixed;
    std::vector<std::uint8_t> fixed(full.pool.size(), 0);

    auto take_position = [&](const Candidate& c) {
        switch (c.position) {
        case Position::GK: --b.gk_min; --b.gk_max; break;
        case Position::DF: --b.df_min; break;
        case Position::MF: --b.mf_min; break;
        case Position::FW: --b.fw_min; break;
        }
    };

    for (const auto& id : d.must_buy) {
        const std::size_t i = find(id);
        if (fixed[i]) continue;
        const Candidate& c = full.pool[i];
        if (c.current) throw ConflictingDirectives(id + " is already in the squad (must_buy)");
        fixed[i] = 1;
        r.fixed_assignments.emplace_back(i, 1);
        ++f.count;
        ++f.transfers;
        f.age_sum += c.age;
        f.rating_sum += c.rating;
        f.cost += c.expected_fee;
        f.buy_mean += c.expected_fee;
        f.buy_var += c.fee_variance;
        --b.k_tot_max;
        --b.k_transfer_max;
        take_position(c);
        --b.buy_min[static_cast<int>(c.position)];
        if (c.other_continent) {
            --b.other_continent_min;
            --b.other_continent_max;
        }
        if (c.top_league) --b.top_league_min;
        if (c.local) --b.local_min;
    }
    for (const auto& id : d.must_sell) {
        const std::size_t i = find(id);
        if (fixed[i]) continue;
        const Candidate& c = full.pool[i];
        if (!c.current) throw ConflictingDirectives(id + " is not in the squad (must_sell)");
        fixed[i] = 1;
        r.fixed_assignments.emplace_back(i, 0);
        ++f.transfers;
        f.cost += c.expected_fee - c.resale;
        b.profit_min -= c.expected_fee;
        --b.k_transfer_max;
    }
    for (const auto& id : d.keep) {
        const std::size_t i = find(id);
        if (fixed[i]) continue;
        const Candidate& c = full.pool[i];
        if (!c.current) throw ConflictingDirectives(id + " is not in the squad (keep)");
        fixed[i] = 1;
        r.fixed_assignments.emplace_back(i, 1);
        ++f.count;
        f.age_sum += c.age;
        f.rating_sum += c.rating;
        --b.k_retain_min;
        --b.k_tot_max;
        take_position(c);
    }

    if (b.k_tot_max < 0) throw InfeasibleAfterFiltering("fixed players exceed k_tot_max");
    if (b.k_transfer_max < 0) throw InfeasibleAfterFiltering("directives exceed k_transfer_max");
    if (b.gk_max < 0) throw InfeasibleAfterFiltering("fixed goalkeepers exceed gk_max");
    if (b.other_continent_max < 0)
        throw InfeasibleAfterFiltering("must-buy players exceed other_continent_max");

    for (std::size_t i = 0; i < full.pool.size(); ++i) {
        if (fixed[i]) continue;
        r.pool.push_back(full.pool[i]);
        r.parent_index.push_back(i);
    }
    r.parent = std::make_shared<const Problem>(full);
    return r;
}

SearchResult run_ga(const Problem& p, const Weights& w, const SolverParams& params,
                    const ProgressFn& progress) {
    Evaluator eval{p, w, params.beta};
    const std::size_t n = p.pool.size();
    if (n == 0) return trivial_result(p, eval);

    const Ranker rank(p);
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int generations = params.effective_iterations();
    const double mutation = params.mutation_rate > 0.0 ? params.mutation_rate : 1.0 / static_cast<double>(n);
    const int pop_size = params.population;
    const int cap = perturbation_cap(p);

    std::vector<Decision> pop;
    pop.reserve(pop_size);
    pop.push_back(rank.status_quo());
    std::uniform_int_distribution<int> flips(1, cap);
    while (static_cast<int>(pop.size()) < pop_size) {
        Decision x = rank.status_quo();
        flip_random(x, flips(rng), rng);
        pop.push_back(std::move(x));
    }
    std::vector<double> fit(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = eval(pop[i]).fitness;

    std::vector<std::size_t> order(pop.size());
    auto rank_population = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rank.better(pop[a], fit[a], pop[b], fit[b]);
        });
    };
    rank_population();

    SearchResult res;
    Decision best = pop[order[0]];
    double best_fit = fit[order[0]];
    res.best_history.push_back(best_fit);

    std::uniform_int_distribution<std::size_t> any(0, pop.size() - 1);
    auto tournament = [&]() -> const Decision& {
        std::size_t winner = any(rng);
        for (int k = 1; k < 3; ++k) {
            const std::size_t c = any(rng);
            if (rank.better(pop[c], fit[c], pop[winner], fit[winner])) winner = c;
        }
        return pop[winner];
    };

    int stall = 0, gen = 0;
    for (gen = 1; gen <= generations; ++gen) {
        std::vector<Decision> next;
        next.reserve(pop.size());
        for (int e = 0; e < params.elite; ++e) next.push_back(pop[order[e]]);
        std::vector<double> next_fit;
        next_fit.reserve(pop.size());
        for (int e = 0; e < params.elite; ++e) next_fit.push_back(fit[order[e]]);
        while (next.size() < pop.size()) {
            const Decision& a = tournament();
            const Decision& b = tournament();
            Decision child = a;
            if (unit(rng) < params.crossover_rate) {
                for (std::size_t i = 0; i < n; ++i)
                    if (unit(rng) < 0.5) child[i] = b[i];
            }
            for (std::size_t i = 0; i < n; ++i)
                if (unit(rng) < mutation) child[i] ^= 1;
            next_fit.push_back(eval(child).fitness);
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        fit = std::move(next_fit);
        rank_population();

        if (rank.better(pop[order[0]], fit[order[0]], best, best_fit)) {
            best = pop[order[0]];
            best_fit = fit[order[0]];
            stall = 0;
        } else {
            ++stall;
        }
        res.best_history.push_back(fit[order[0]]);
        if (progress) progress(gen, generations);
        if (stall >= params.stall) break;
    }
    res.x = best;
    res.score = fitness(p, best, w, params.beta);
    res.iterations = std::min(gen, generations);
    res.evaluations = eval.count;
    return res;
}

SearchResult run_sa(const Problem& p, const Weights& w, const SolverParams& params,
                    const ProgressFn& progress) {
    Evaluator eval{p, w, params.beta};
    const std::size_t n = p.pool.size();
    if (n == 0) return trivial_result(p, eval);

    const Ranker rank(p);
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const int steps = params.effective_iterations();
    const double ratio =
        std::pow(params.final_temperature / params.initial_temperature, 1.0 / std::max(1, steps));

    Decision x = rank.status_quo();
    double fx = eval(x).fitness;
    Decision best = x;
    double best_fit = fx;
    double temp = params.initial_temperature;

    SearchResult res;
    res.best_history.reserve(static_cast<std::size_t>(steps) + 1);
    res.best_history.push_back(best_fit);
    const long report_every = std::max(1, steps / 100);
    for (int it = 1; it <= steps; ++it) {
        const std::size_t i = pick(rng);
        x[i] ^= 1;
        const double fy = eval(x).fitness;
        const double delta = fy - fx;
        if (delta >= 0.0 || unit(rng) < std::exp(delta / temp)) {
            fx = fy;
            if (rank.better(x, fx, best, best_fit)) {
                best = x;
                best_fit = fx;
            }
        } else {
            x[i] ^= 1;
        }
        temp *= ratio;
        res.best_history.push_back(best_fit);
        if (progress && it % report_every == 0) progress(it, steps);
    }
    res.x = best;
    res.score = fitness(p, best, w, params.beta);
    res.iterations = steps;
    res.evaluations = eval.count;
    return res;
}

SearchResult run_hc(const Problem& p, const Weights& w, const SolverParams& params,
                    const ProgressFn& progress) {
    Evaluator eval{p, w, params.beta};
    const std::size_t n = p.pool.size();
    if (n == 0) return trivial_result(p, eval);

    const Ranker rank(p);
    std::mt19937_64 rng(params.seed);
    const int max_steps = params.effective_iterations();
    const int cap = perturbation_cap(p);
    std::uniform_int_distribution<int> flips(1, cap);

    Decision best = rank.status_quo();
    double best_fit = eval(best).fitness;
    SearchResult res;
    res.best_history.push_back(best_fit);
    int total_steps = 0;

    for (int r = 0; r < params.restarts; ++r) {
        Decision x = rank.status_quo();
        if (r > 0) flip_random(x, flips(rng), rng);
        double fx = eval(x).fitness;
        for (int step = 0; step < max_steps; ++step) {
            std::size_t move = n;
            double move_fit = fx;
            Decision move_x;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] ^= 1;
                const double fy = eval(x).fitness;
                if (fy > move_fit || (move < n && fy == move_fit && rank.better(x, fy, move_x, move_fit))) {
                    move = i;
                    move_fit = fy;
                    move_x = x;
                }
                x[i] ^= 1;
            }
            if (move == n) break;
            x[move] ^= 1;
            fx = move_fit;
            ++total_steps;
        }
        if (rank.better(x, fx, best, best_fit)) {
            best = x;
            best_fit = fx;
        }
        res.best_history.push_back(best_fit);
        if (progress) progress(r + 1, params.restarts);
    }
    res.x = best;
    res.score = fitness(p, best, w, params.beta);
    res.iterations = total_steps;
    res.evaluations = eval.count;
    return res;
}

TransferPlan make_plan(const Problem& p, const Decision& x, const Weights& w, double beta,
                       const SolverTrace& trace) {
    const Problem& root = p.root();
    const Decision full = p.expand(x);
    TransferPlan plan;
    plan.breakdown = fitness(root, full, w, beta);
    plan.feasible = plan.breakdown.feasible();
    plan.normalized = root.normalize;
    plan.transfers = transfer_count(root, full);
    plan.squad_size = squad_size(root, full);
    plan.trace = trace;
    for (std::size_t i = 0; i < root.pool.size(); ++i) {
        const Candidate& c = root.pool[i];
        const bool on = full[i] != 0;
        plan.decision[c.player_id] = on;
        if (!c.current && on)
            plan.buys.push_back({c.player_id, c.expected_fee, c.fee.quantile(0.25), c.fee.quantile(0.75)});
        else if (c.current && !on)
            plan.sells.push_back({c.player_id, c.expected_fee, 0.0, 0.0});
    }
    return plan;
}

TransferPlan solve(const Problem& p, const Weights& w, const SolverParams& params,
                   const ProgressFn& progress) {
    p.validate();
    params.validate();
    if (params.method == Method::Brute) return brute_force(p, w);

    SearchResult res = dispatch(p, w, params, progress);
    SolverTrace trace{params.method, res.iterations, res.evaluations, false, params.seed};
    TransferPlan plan = make_plan(p, res.x, w, params.beta, trace);
    if (plan.feasible) return plan;

    SolverParams again = params;
    again.iterations = 2 * params.effective_iterations();
    again.stall = 2 * params.stall;
    SearchResult second = dispatch(p, w, again, progress);
    trace.rerun_used = true;
    trace.iterations += second.iterations;
    trace.evaluations += second.evaluations;
    const Ranker rank(p);
    const SearchResult& pick =
        rank.better(second.x, second.score.fitness, res.x, res.score.fitness) ? second : res;
    return make_plan(p, pick.x, w, params.beta, trace);
}

TransferPlan brute_force(const Problem& p, const Weights& w) {
    const std::size_t n = p.pool.size();
    if (n > kBruteForceLimit)
        throw PoolTooLarge(std::to_string(n) + " candidates, limit " + std::to_string(kBruteForceLimit));
    p.validate();
    const Ranker rank(p);
    Decision x(n, 0), best, fallback;
    double best_raw = 0.0, fallback_fit = 0.0;
    bool found = false;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1u;
        const ObjectiveBreakdown o = fitness(p, x, w, 1.0);
        if (o.feasible()) {
            if (!found || rank.better(x, o.raw, best, best_raw)) {
                best = x;
                best_raw = o.raw;
                found = true;
            }
        } else if (!found && (fallback.empty() || rank.better(x, o.fitness, fallback, fallback_fit))) {
            fallback = x;
            fallback_fit = o.fitness;
        }
    }
    SolverTrace trace{Method::Brute, 1, static_cast<long>(total), false, 0};
    return make_plan(p, found ? best : fallback, w, 1.0, trace);
}

Weights weights_for_lambda3(double lambda3) {
    if (!(lambda3 >= 0.0 && lambda3 <= 1.0)) throw BadWeight("lambda3 must lie in [0,1]");
    const double rest = 0.5 * (1.0 - lambda3);
    return {rest, rest, lambda3};
}

DominanceReport compare_solvers(const std::vector<Problem>& problems,
                                const std::vector<Method>& methods,
                                const std::vector<double>& lambda3_grid, const SolverParams& base) {
    if (methods.size() < 2) throw BadValue("compare_solvers needs at least two methods");
    DominanceReport rep;
    rep.methods = methods;
    rep.lambda3 = lambda3_grid;
    const std::size_t m = methods.size();
    rep.dominance.assign(m, std::vector<int>(m, 0));
    rep.shared.assign(m, std::vector<int>(m, 0));
    rep.feasible_runs.assign(m, 0);

    // records[(instance * grid + l) * m + method]
    for (std::size_t inst = 0; inst < problems.size(); ++inst) {
        const Problem& p = problems[inst];
        const Problem& root = p.root();
        for (double l3 : lambda3_grid) {
            const Weights w = weights_for_lambda3(l3);
            for (Method method : methods) {
                SolverParams params = base;
                params.method = method;
                const auto t0 = std::chrono::steady_clock::now();
                const TransferPlan plan = solve(p, w, params);
                const auto t1 = std::chrono::steady_clock::now();
                BenchRecord r;
                r.instance = inst;
                r.method = method;
                r.lambda3 = l3;
                r.feasible = plan.feasible;
                r.cost = plan.breakdown.cost;
                r.normalized_cost = plan.breakdown.cost / root.cost_scale;
                r.mean_rating = plan.squad_size > 0 ? plan.breakdown.quality / plan.squad_size : 0.0;
                r.rating_improvement = r.mean_rating - root.squad.avg_rating;
                r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                r.evaluations = plan.trace.evaluations;
                rep.records.push_back(r);
            }
        }
    }
    const std::size_t runs = problems.size() * lambda3_grid.size();
    for (std::size_t run = 0; run < runs; ++run) {
        const BenchRecord* row = &rep.records[run * m];
        for (std::size_t a = 0; a < m; ++a) {
            if (!row[a].feasible) continue;
            ++rep.feasible_runs[a];
            for (std::size_t b = 0; b < m; ++b) {
                if (!row[b].feasible) continue;
                ++rep.shared[a][b];
                if (row[a].normalized_cost < row[b].normalized_cost &&
                    row[a].rating_improvement > row[b].rating_improvement)
                    ++rep.dominance[a][b];
            }
        }
    }
    return rep;
}

} // namespace tfe
