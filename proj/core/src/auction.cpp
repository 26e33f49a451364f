#include "tfe/auction.hpp"

#include "tfe/errors.hpp"
#include "tfe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tfe {

double ValuationDist::cdf(double s) const {
    if (kind == Kind::Uniform) return std::clamp((s - a) / (b - a), 0.0, 1.0);
    return LogNormalParams{a, b}.cdf(s);
}

double ValuationDist::pdf(double s) const {
    if (kind == Kind::Uniform) return (s >= a && s <= b) ? 1.0 / (b - a) : 0.0;
    return LogNormalParams{a, b}.pdf(s);
}

double ValuationDist::sample(double z, double u) const {
    if (kind == Kind::Uniform) return a + (b - a) * u;
    return std::exp(a + b * z);
}

double AuctionSetup::upsilon() const {
    if (upsilon_override) return *upsilon_override;
    return reserve.quantile(upsilon_quantile);
}

void AuctionSetup::validate() const {
    if (bidders.empty()) throw BadSetup("auction needs at least one bidder");
    if (!(reserve.sigma > 0.0)) throw BadSetup("reserve sigma must be positive");
    if (!(upsilon_quantile > 0.0 && upsilon_quantile < 1.0))
        throw BadSetup("upsilon quantile must lie in (0,1)");
    if (!(common_lower_support < upsilon()))
        throw BadSetup("common lower support must lie below upsilon");
    if (max_rounds < 1) throw BadSetup("max_rounds must be >= 1");
    if (grid_points < 3) throw BadSetup("grid needs at least 3 points");
    for (const auto& b : bidders) {
        if (b.valuation.kind == ValuationDist::Kind::LogNormal && !(b.valuation.b > 0.0))
            throw BadSetup("valuation sigma must be positive for " + b.club_id);
        if (b.valuation.kind == ValuationDist::Kind::Uniform && !(b.valuation.b > b.valuation.a))
            throw BadSetup("uniform valuation needs lower < upper for " + b.club_id);
    }
}

std::optional<double> EquilibriumSolution::bid(std::size_t c, double s) const {
    return monotone_invert(psi[c], s);
}

double truncated_reserve_cdf(const AuctionSetup& st, double tau, double b) {
    const double ups = st.upsilon();
    if (!(b > tau) || b > ups) throw OutOfWindow("bid outside (tau_prev, upsilon]");
    const double Ht = st.reserve.cdf(tau);
    return (st.reserve.cdf(b) - Ht) / (st.reserve.cdf(ups) - Ht);
}

double truncated_reserve_hazard(const AuctionSetup& st, double tau, double b) {
    if (!(b > tau) || b > st.upsilon()) throw OutOfWindow("bid outside (tau_prev, upsilon]");
    return st.reserve.pdf(b) / (st.reserve.cdf(b) - st.reserve.cdf(tau));
}

double truncated_affinity(const AuctionSetup& st, std::size_t c, double b) {
    const auto& p = st.bidders[c].affinity;
    return std::min(p.value(b) / p.value(st.upsilon()), 1.0);
}

namespace {

// Unchecked hazard for the residual loop (the grid never leaves the window).
inline double hazard(const AuctionSetup& st, double Htau, double b) {
    return st.reserve.pdf(b) / (st.reserve.cdf(b) - Htau);
}

// B_c = sum_{j!=c} g_j - (C-2) g_c - lambda(b),  g_j = 1/(psi_j - b) - p_j'/p_j
void bracket_into(const AuctionSetup& st, double lambda, double b, const double* psi,
                  std::size_t stride, double* out) {
    const std::size_t C = st.size();
    double G = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        out[c] = 1.0 / (psi[c * stride] - b) - st.bidders[c].affinity.log_derivative(b);
        G += out[c];
    }
    const double cm1 = static_cast<double>(C) - 1.0;
    for (std::size_t c = 0; c < C; ++c) out[c] = G - cm1 * out[c] - lambda;
}

bool gap_ok(const AuctionSetup& st, const std::vector<double>& B) {
    if (st.gap_rule == GapRule::EveryClub)
        return std::all_of(B.begin(), B.end(), [](double v) { return v > 0.0; });
    return std::accumulate(B.begin(), B.end(), 0.0) > 0.0;
}

} // namespace

std::vector<double> ode_bracket(const AuctionSetup& st, double tau, double b,
                                const std::vector<double>& psi) {
    std::vector<double> out(st.size());
    bracket_into(st, hazard(st, st.reserve.cdf(tau), b), b, psi.data(), 1, out.data());
    return out;
}

double compute_bid_gap(const AuctionSetup& st, double tau, const std::vector<double>& sl) {
    const double ups = st.upsilon();
    if (!(tau + st.gap_floor < ups)) throw NoFeasibleGap("window (tau+floor, upsilon] is empty");
    const double limit = std::min(*std::min_element(sl.begin(), sl.end()), ups) - tau;
    auto ok = [&](double d) { return gap_ok(st, ode_bracket(st, tau, tau + d, sl)); };

    // coarse scan, then bisection on the bracketing cell
    constexpr double step = 0.01;
    double hi = step;
    for (; hi < limit; hi += step)
        if (ok(hi)) break;
    if (!(hi < limit)) throw NoFeasibleGap("bracket never turns positive below the lower supports");
    double lo = std::max(hi - step, 1e-9);
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    const double gap = std::max(hi, st.gap_floor);
    if (!(tau + gap < ups)) throw NoFeasibleGap("gap pushes the grid past upsilon");
    return gap;
}

EquilibriumSolution solve_equilibrium_unchecked(const AuctionSetup& st, double tau,
                                                const std::vector<double>& sl, int round) {
    st.validate();
    const std::size_t C = st.size();
    if (C < 2) throw BadSetup("equilibrium system needs >= 2 bidders; use bid_single");
    if (sl.size() != C) throw BadSetup("one lower support per bidder required");

    EquilibriumSolution eq;
    eq.round = round;
    eq.tau_prev = tau;
    eq.lower_supports = sl;
    eq.bid_gap = compute_bid_gap(st, tau, sl);

    const std::size_t N = static_cast<std::size_t>(st.grid_points);
    const double ups = st.upsilon();
    const double bmin = tau + eq.bid_gap;
    const double h = (ups - bmin) / static_cast<double>(N - 1);
    eq.grid.resize(N);
    for (std::size_t n = 0; n < N; ++n) eq.grid[n] = bmin + h * static_cast<double>(n);
    eq.grid.back() = ups;

    // per-node constants
    const double Htau = st.reserve.cdf(tau);
    std::vector<double> lambda(N);
    for (std::size_t n = 0; n < N; ++n) lambda[n] = hazard(st, Htau, eq.grid[n]);
    std::vector<double> Fs(C, 0.0);
    if (st.numerator == Numerator::Truncated)
        for (std::size_t c = 0; c < C; ++c) Fs[c] = st.bidders[c].valuation.cdf(sl[c]);
    const double cm1 = static_cast<double>(C) - 1.0;

    // x is club-major: x[c*N + n] = psi_c(b_n)
    ResidualFn residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(C * N));
        std::vector<double> B(C);
        for (std::size_t c = 0; c < C; ++c) r[c * N] = x[c * N] - sl[c];
        for (std::size_t n = 1; n < N; ++n) {
            bracket_into(st, lambda[n], eq.grid[n], x.data() + n, N, B.data());
            for (std::size_t c = 0; c < C; ++c) {
                const double* p = x.data() + c * N;
                const double d = (n + 1 < N) ? (p[n + 1] - p[n - 1]) / (2.0 * h)
                                             : (p[n] - p[n - 1]) / h;
                const auto& v = st.bidders[c].valuation;
                const double ratio = v.pdf(p[n]) / (v.cdf(p[n]) - Fs[c]);
                r[c * N + n] = ratio * d - B[c] / cm1;
            }
        }
        return r;
    };

    Eigen::VectorXd x0(static_cast<Eigen::Index>(C * N));
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t n = 0; n < N; ++n) x0[c * N + n] = eq.grid[n] + (sl[c] - bmin);

    BroydenOptions opts;
    opts.tol = st.broyden_tol;
    opts.max_iter = st.broyden_max_iter;
    BroydenResult res;
    try {
        res = broyden_iterate(residual, x0, opts);
    } catch (const NonFiniteResidual&) {
        res.x = x0;
        res.residual_norm = std::numeric_limits<double>::infinity();
    }
    eq.residual_norm = res.residual_norm;
    eq.iterations = res.iterations;
    eq.converged = res.converged;

    // Accepted only if nondecreasing at every node. The drop is reported
    // separately for the first step, where heterogeneous lower supports show
    // up as a kink, and for the rest of the grid. The inversion table takes
    // the running maximum so tolerance-level wiggles cannot break bisection.
    eq.monotone_ok = true;
    eq.psi.resize(C);
    for (std::size_t c = 0; c < C; ++c) {
        auto& t = eq.psi[c];
        t.xs = eq.grid;
        t.ys.resize(N);
        for (std::size_t n = 0; n < N; ++n) t.ys[n] = res.x[c * N + n];
        for (std::size_t n = 1; n < N; ++n) {
            const double drop = t.ys[n - 1] - t.ys[n];
            if (n >= 2) eq.interior_decrease = std::max(eq.interior_decrease, drop);
            else eq.boundary_decrease = std::max(eq.boundary_decrease, drop);
        }
        if (std::max(eq.boundary_decrease, eq.interior_decrease) > st.monotone_tol)
            eq.monotone_ok = false;
        for (std::size_t n = 0; n < N; ++n)
            if (!(t.ys[n] > eq.grid[n])) eq.monotone_ok = false;
        for (std::size_t n = 1; n < N; ++n) t.ys[n] = std::max(t.ys[n], t.ys[n - 1]);
    }
    return eq;
}

EquilibriumSolution solve_equilibrium(const AuctionSetup& st, double tau,
                                      const std::vector<double>& sl, int round) {
    auto eq = solve_equilibrium_unchecked(st, tau, sl, round);
    if (!eq.converged)
        throw NoConvergence("equilibrium residual " + std::to_string(eq.residual_norm) +
                            " after " + std::to_string(eq.iterations) + " iterations");
    if (!eq.monotone_ok) throw NonMonotoneSolution("inverse bid function decreases");
    return eq;
}

EquilibriumSolution solve_round_one(const AuctionSetup& st) {
    return solve_equilibrium(st, 0.0, std::vector<double>(st.size(), st.common_lower_support), 1);
}

double foc_residual(const AuctionSetup& st, const EquilibriumSolution& eq) {
    // 1/(psi_c - b) = p_c'/p_c + lambda(b) + sum_{j!=c} f_j(psi_j) psi_j' / (F_j(psi_j) - F_j(s_j))
    const std::size_t C = st.size(), N = eq.grid.size();
    const double h = eq.grid[1] - eq.grid[0];
    const double Htau = st.reserve.cdf(eq.tau_prev);
    double worst = 0.0;
    for (std::size_t n = 1; n + 1 < N; ++n) {
        const double b = eq.grid[n];
        std::vector<double> term(C);
        for (std::size_t j = 0; j < C; ++j) {
            const auto& v = st.bidders[j].valuation;
            const auto& y = eq.psi[j].ys;
            const double Fs = st.numerator == Numerator::Truncated
                                  ? v.cdf(eq.lower_supports[j]) : 0.0;
            term[j] = v.pdf(y[n]) / (v.cdf(y[n]) - Fs) * (y[n + 1] - y[n - 1]) / (2.0 * h);
        }
        const double total = std::accumulate(term.begin(), term.end(), 0.0);
        for (std::size_t c = 0; c < C; ++c) {
            const double lhs = 1.0 / (eq.psi[c].ys[n] - b);
            const double rhs = st.bidders[c].affinity.log_derivative(b) + hazard(st, Htau, b) +
                               (total - term[c]);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

std::optional<double> bid_single(const AuctionSetup& st, double tau, double s) {
    const double ups = st.upsilon();
    const double lo = tau + st.gap_floor;
    const double hi = std::min(s, ups);
    if (!(hi > lo)) return std::nullopt;
    auto utility = [&](double b) {
        return (s - b) * truncated_affinity(st, 0, b) * truncated_reserve_cdf(st, tau, b);
    };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, c = hi;
    double x1 = c - invphi * (c - a), x2 = a + invphi * (c - a);
    double f1 = utility(x1), f2 = utility(x2);
    while (c - a > 1e-6) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (c - a);
            f2 = utility(x2);
        } else {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - invphi * (c - a);
            f1 = utility(x1);
        }
    }
    double best = 0.5 * (a + c);
    // the maximizer may sit on an endpoint of the window
    for (double e : {lo, hi})
        if (utility(e) > utility(best)) best = e;
    if (!(utility(best) > 0.0)) return std::nullopt;
    return best;
}

double allocation_probability(const EquilibriumSolution& eq, const AuctionSetup& st,
                              std::size_t club, double b) {
    if (b < eq.grid.front() || b > eq.grid.back()) throw OutOfWindow("bid outside the grid");
    double q = truncated_affinity(st, club, b) * truncated_reserve_cdf(st, eq.tau_prev, b);
    for (std::size_t j = 0; j < st.size(); ++j)
        if (j != club) q *= st.bidders[j].valuation.cdf(interpolate(eq.psi[j], b));
    return std::clamp(q, 0.0, 1.0);
}

const EquilibriumSolution& RoundLookup::select(double tau_prev) const {
    if (entries.empty()) throw EmptyLookup("lookup has no entries");
    const EquilibriumSolution* pick = &entries.front();
    for (const auto& e : entries)
        if (e.tau_prev <= tau_prev) pick = &e;
    return *pick;
}

RoundLookup single_round_lookup(const AuctionSetup& st) {
    RoundLookup lk;
    lk.feasibility_cutoff = 0.95 * st.upsilon();
    lk.entries.push_back(solve_round_one(st));
    return lk;
}

namespace {

// Linear-interpolation sample quantile (type 7).
double sample_quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= v.size()) return v.back();
    return v[k] + (pos - static_cast<double>(k)) * (v[k + 1] - v[k]);
}

} // namespace

RoundLookup build_lookup(const AuctionSetup& st, const LookupOptions& opts) {
    RoundLookup lk = single_round_lookup(st);
    const std::size_t C = st.size();
    const double ups = st.upsilon();

    std::vector<double> winning;
    for (int k = 0; k < opts.draws; ++k) {
        auto gen = make_stream(opts.seed, static_cast<std::uint64_t>(k));
        std::normal_distribution<double> z;
        std::uniform_real_distribution<double> u;
        double best = -1.0;
        for (std::size_t c = 0; c < C; ++c) {
            const double s = st.bidders[c].valuation.sample(z(gen), u(gen));
            if (auto b = lk.entries.front().bid(c, s)) best = std::max(best, *b);
        }
        if (best > 0.0) winning.push_back(best);
    }
    if (winning.empty()) return lk;

    int round = 2;
    for (int d = 2; d <= 9; ++d) {
        LookupCandidate cand;
        cand.tau = sample_quantile(winning, 0.1 * d);
        const auto& prev = lk.entries.back();
        for (std::size_t c = 0; c < C; ++c)
            cand.lower_supports.push_back(interpolate(prev.psi[c], cand.tau));

        const bool supports_ok = std::all_of(cand.lower_supports.begin(), cand.lower_supports.end(),
                                             [&](double s) { return s < lk.feasibility_cutoff; });
        if (!supports_ok || !(cand.tau + st.gap_floor < ups)) {
            cand.status = "infeasible";
            lk.candidates.push_back(cand);
            break;
        }
        EquilibriumSolution eq;
        try {
            eq = solve_equilibrium_unchecked(st, cand.tau, cand.lower_supports, round);
        } catch (const NoFeasibleGap&) {
            cand.status = "nogap";
            lk.candidates.push_back(cand);
            break;
        }
        cand.bid_gap = eq.bid_gap;
        cand.residual_norm = eq.residual_norm;
        if (!eq.converged) {
            cand.status = "noconvergence";
        } else if (!eq.monotone_ok) {
            cand.status = "nonmonotone";
        } else {
            cand.status = "accepted";
            lk.entries.push_back(std::move(eq));
            ++round;
        }
        lk.candidates.push_back(cand);
    }
    return lk;
}

} // namespace tfe
