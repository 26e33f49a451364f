#include "tfe/objective.hpp"

#include "tfe/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tfe {
namespace {

struct Tally {
    int chosen = 0;
    int current_kept = 0;
    int transfers = 0;
    std::array<int, 4> by_pos{};
    std::array<int, 4> buys_by_pos{};
    int other_continent = 0, top_league = 0, local = 0;
    double age_sum = 0.0, rating_sum = 0.0;
    double buy_mean = 0.0, buy_var = 0.0;
    double sell_value = 0.0; // sum of E(Y) over sold current players
    double cost = 0.0;
};

void check_size(const Problem& p, const Decision& x) {
    if (x.size() != p.pool.size())
        throw BadValue("decision has " + std::to_string(x.size()) + " entries, pool has " +
                       std::to_string(p.pool.size()));
}

Tally tally(const Problem& p, const Decision& x) {
    check_size(p, x);
    Tally t;
    for (std::size_t i = 0; i < p.pool.size(); ++i) {
        const Candidate& c = p.pool[i];
        const bool on = x[i] != 0;
        if (c.current) {
            if (on) {
                ++t.current_kept;
            } else {
                ++t.transfers;
                t.sell_value += c.expected_fee;
                t.cost += c.expected_fee - c.resale;
            }
        } else if (on) {
            ++t.transfers;
            ++t.buys_by_pos[static_cast<int>(c.position)];
            t.other_continent += c.other_continent;
            t.top_league += c.top_league;
            t.local += c.local;
            t.buy_mean += c.expected_fee;
            t.buy_var += c.fee_variance;
            t.cost += c.expected_fee;
        }
        if (on) {
            ++t.chosen;
            ++t.by_pos[static_cast<int>(c.position)];
            t.age_sum += c.age;
            t.rating_sum += c.rating;
        }
    }
    return t;
}

double two_sided(int n, int lo, int hi) {
    return std::max(0, lo - n) + std::max(0, n - hi);
}

double snap(double g) { return g > kViolationSnap ? g : 0.0; }

} // namespace

Candidate make_candidate(std::string id, bool current, Position pos, double age, double rating,
                         LogNormalParams fee) {
    Candidate c;
    c.player_id = std::move(id);
    c.current = current;
    c.position = pos;
    c.age = age;
    c.rating = rating;
    c.fee = fee;
    c.expected_fee = fee.mean();
    c.fee_variance = fee.variance();
    c.resale = c.expected_fee;
    return c;
}

void Problem::validate() const {
    for (const auto& c : pool) {
        if (!std::isfinite(c.expected_fee) || c.expected_fee < 0.0 || !std::isfinite(c.fee_variance) ||
            c.fee_variance < 0.0 || !std::isfinite(c.resale))
            throw UnpricedPlayer(c.player_id);
        if (!std::isfinite(c.rating)) throw MissingForecast(c.player_id);
        if (!std::isfinite(c.age)) throw MissingAnnotation(c.player_id + ": age");
    }
    if (!(bounds.budget_max > 0.0)) throw BadValue("budget_max must be positive");
    if (!(bounds.alpha > 0.0 && bounds.alpha < 1.0)) throw BadValue("alpha must lie in (0,1)");
}

Decision Problem::status_quo() const {
    Decision x(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) x[i] = pool[i].current ? 1 : 0;
    return x;
}

Decision Problem::expand(const Decision& x) const {
    check_size(*this, x);
    if (!parent) return x;
    Decision full(parent->pool.size(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) full[parent_index[i]] = x[i];
    for (const auto& [idx, v] : fixed_assignments) full[idx] = v;
    return full;
}

Problem make_problem(std::vector<Candidate> pool, ConstraintBounds bounds, bool normalize) {
    Problem p;
    p.pool = std::move(pool);
    p.bounds = bounds;
    p.normalize = normalize;
    double age = 0.0, rating = 0.0, max_rating = 0.0;
    for (const auto& c : p.pool) {
        max_rating = std::max(max_rating, c.rating);
        if (!c.current) continue;
        ++p.squad.size;
        age += c.age;
        rating += c.rating;
    }
    if (p.squad.size > 0) {
        p.squad.avg_age = age / p.squad.size;
        p.squad.avg_rating = rating / p.squad.size;
    }
    p.cost_scale = bounds.budget_max;
    p.quality_scale = std::max(1.0, static_cast<double>(bounds.k_tot_max)) * std::max(max_rating, 1e-12);
    return p;
}

double compute_cost(const Problem& p, const Decision& x) { return p.fixed.cost + tally(p, x).cost; }

double compute_risk(const Problem& p, const Decision& x) {
    return std::sqrt(p.fixed.buy_var + tally(p, x).buy_var);
}

double compute_quality(const Problem& p, const Decision& x) {
    return p.fixed.rating_sum + tally(p, x).rating_sum;
}

namespace {

Violations violations_from(const Problem& p, const Tally& t) {
    const ConstraintBounds& b = p.bounds;
    const FixedPart& f = p.fixed;
    Violations v{};

    const double mean = f.buy_mean + t.buy_mean;
    if (mean > 0.0) {
        const LogNormalParams total = marlow_from_moments(mean, f.buy_var + t.buy_var);
        v[0] = chance_bound(total, b.alpha) - std::log(b.budget_max);
    }
    v[1] = t.chosen - b.k_tot_max;
    v[2] = b.k_retain_min - t.current_kept;
    v[3] = t.transfers - b.k_transfer_max;
    v[4] = b.profit_min - t.sell_value;
    v[5] = two_sided(t.by_pos[0], b.gk_min, b.gk_max);
    v[6] = b.df_min - t.by_pos[1];
    v[7] = b.mf_min - t.by_pos[2];
    v[8] = b.fw_min - t.by_pos[3];
    for (int k = 0; k < 4; ++k) v[9 + k] = b.buy_min[k] - t.buys_by_pos[k];
    v[13] = two_sided(t.other_continent, b.other_continent_min, b.other_continent_max);
    v[14] = b.top_league_min - t.top_league;
    v[15] = b.local_min - t.local;

    const int n = f.count + t.chosen;
    if (n == 0) {
        v[16] = 1.0;
        v[17] = 1.0;
    } else {
        v[16] = (f.age_sum + t.age_sum) / n - p.squad.avg_age;
        v[17] = p.squad.avg_rating - (f.rating_sum + t.rating_sum) / n;
    }
    for (double& g : v) g = snap(g);
    return v;
}

} // namespace

Violations evaluate_constraints(const Problem& p, const Decision& x) {
    return violations_from(p, tally(p, x));
}

ObjectiveBreakdown fitness(const Problem& p, const Decision& x, const Weights& w, double beta) {
    const Tally t = tally(p, x);
    ObjectiveBreakdown o;
    o.cost = p.fixed.cost + t.cost;
    o.risk = std::sqrt(p.fixed.buy_var + t.buy_var);
    o.quality = p.fixed.rating_sum + t.rating_sum;
    if (p.normalize) {
        o.raw = -(w.cost * o.cost / p.cost_scale + w.risk * o.risk / p.cost_scale) +
                w.quality * o.quality / p.quality_scale;
    } else {
        o.raw = -(w.cost * o.cost + w.risk * o.risk) + w.quality * o.quality;
    }
    o.violations = violations_from(p, t);
    for (double g : o.violations) o.penalty += g;
    o.fitness = o.raw - beta * o.penalty;
    return o;
}

int squad_size(const Problem& p, const Decision& x) { return p.fixed.count + tally(p, x).chosen; }

int transfer_count(const Problem& p, const Decision& x) {
    return p.fixed.transfers + tally(p, x).transfers;
}

} // namespace tfe
