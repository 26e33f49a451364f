#include "tfe/simulation.hpp"

#include "tfe/errors.hpp"
#include "tfe/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace tfe {

std::optional<PriceSummary> summarize_prices(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    PriceSummary s;
    s.n = v.size();
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(s.n);
    auto rank = [&](double p) {
        const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(s.n)));
        return v[std::clamp<std::size_t>(k, 1, s.n) - 1];
    };
    s.median = rank(0.5);
    s.q1 = rank(0.25);
    s.q3 = rank(0.75);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

double acceptance_probability(const AuctionSetup& st, double tau_prev, std::size_t winner,
                              double tau) {
    const double ups = st.upsilon();
    if (!(tau > tau_prev) || tau > ups * (1.0 + 1e-12))
        throw OutOfWindow("winning bid outside (tau_prev, upsilon]");
    if (tau >= ups) return 1.0;
    const double Hp = st.reserve.cdf(tau_prev);
    const double incr = (st.reserve.cdf(tau) - Hp) / (st.reserve.cdf(ups) - Hp);
    return std::clamp(truncated_affinity(st, winner, tau) * incr, 0.0, 1.0);
}

PathOutcome simulate_path(const AuctionSetup& st, const RoundLookup& lk, int rounds,
                          std::uint64_t seed, std::uint64_t path) {
    const std::size_t C = st.size();
    auto gen = make_stream(seed, path);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> u;

    // valuations are private and persist across rounds
    std::vector<double> S(C);
    for (std::size_t c = 0; c < C; ++c) S[c] = st.bidders[c].valuation.sample(z(gen), u(gen));

    PathOutcome out;
    double tau_prev = 0.0;
    std::vector<double> bids(C);
    std::vector<std::size_t> tied;
    for (int r = 1; r <= rounds; ++r) {
        out.round = r;
        double best = -1.0;
        if (C == 1) {
            auto b = bid_single(st, tau_prev, S[0]);
            bids[0] = b ? *b : -1.0;
        } else {
            const auto& eq = lk.select(tau_prev);
            for (std::size_t c = 0; c < C; ++c) {
                auto b = eq.bid(c, S[c]);
                bids[c] = b ? *b : -1.0;
            }
        }
        // a bid that does not beat the announced threshold carries no offer
        for (auto& b : bids)
            if (b <= tau_prev) b = -1.0;
        for (double b : bids) best = std::max(best, b);
        if (best < 0.0) {
            out.abstained = true;
            return out;
        }
        tied.clear();
        for (std::size_t c = 0; c < C; ++c)
            if (bids[c] == best) tied.push_back(c);
        std::size_t winner = tied.front();
        if (tied.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
            winner = tied[pick(gen)];
        }
        const double a = acceptance_probability(st, tau_prev, winner, best);
        if (u(gen) <= a) {
            out.sold = true;
            out.winner = winner;
            out.price = best;
            return out;
        }
        out.thresholds.push_back(best);
        tau_prev = best;
    }
    return out;
}

AuctionStats simulate(const AuctionSetup& st, const RoundLookup& lk, std::size_t n_sim,
                      std::uint64_t seed, int rounds, unsigned threads,
                      const SimProgressFn& progress) {
    if (st.size() > 1 && lk.entries.empty()) throw EmptyLookup("lookup has no entries");
    if (n_sim == 0) throw BadSetup("n_sim must be >= 1");
    if (rounds <= 0) rounds = st.max_rounds;

    std::vector<PathOutcome> paths(n_sim);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_sim));
    {
        std::atomic<std::size_t> done{0};
        const std::size_t report_every = std::max<std::size_t>(1, n_sim / 100);
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t p = t; p < n_sim; p += threads) {
                    paths[p] = simulate_path(st, lk, rounds, seed, p);
                    const std::size_t k = ++done;
                    if (progress && (k % report_every == 0 || k == n_sim)) progress(k, n_sim);
                }
            });
    }

    // deterministic reduction in path order
    const std::size_t C = st.size();
    AuctionStats s;
    s.n_sim = n_sim;
    s.max_rounds = rounds;
    s.seed = seed;
    s.upsilon = st.upsilon();
    s.lookup_entries = lk.entries.size();
    for (const auto& b : st.bidders) s.clubs.push_back(b.club_id);

    std::vector<std::vector<double>> round_prices(rounds);
    std::vector<std::vector<std::size_t>> round_wins(rounds, std::vector<std::size_t>(C, 0));
    std::vector<std::size_t> reached(rounds, 0);
    std::vector<double> all_prices;
    std::vector<std::size_t> wins(C, 0);
    for (const auto& p : paths) {
        for (int r = 0; r < p.round; ++r) ++reached[r];
        if (p.sold) {
            round_prices[p.round - 1].push_back(p.price);
            ++round_wins[p.round - 1][p.winner];
            ++wins[p.winner];
            all_prices.push_back(p.price);
        } else {
            ++s.unsold;
            if (p.abstained) ++s.abstained;
        }
    }
    for (int r = 0; r < rounds; ++r) {
        RoundStats rs;
        rs.round = r + 1;
        rs.reached = reached[r];
        rs.sales = round_prices[r].size();
        rs.conditional_rate = rs.reached ? double(rs.sales) / double(rs.reached) : 0.0;
        rs.price = summarize_prices(round_prices[r]);
        rs.win_share.assign(C, 0.0);
        if (rs.sales)
            for (std::size_t c = 0; c < C; ++c)
                rs.win_share[c] = double(round_wins[r][c]) / double(rs.sales);
        s.rounds.push_back(std::move(rs));
    }
    s.sales = all_prices.size();
    s.sale_probability = double(s.sales) / double(n_sim);
    s.price = summarize_prices(all_prices);
    s.win_share.assign(C, 0.0);
    if (s.sales)
        for (std::size_t c = 0; c < C; ++c) s.win_share[c] = double(wins[c]) / double(s.sales);
    return s;
}

} // namespace tfe
