#pragma once
#include "tfe/auction.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tfe {

struct PriceSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    std::optional<double> sd; // absent for n < 2
    double q1 = 0.0;
    double q3 = 0.0;
};

// Median / quartiles by nearest rank, SD with denominator n-1; nullopt when empty.
std::optional<PriceSummary> summarize_prices(std::vector<double> prices);

struct RoundStats {
    int round = 1;
    std::size_t reached = 0;
    std::size_t sales = 0;
    double conditional_rate = 0.0; // sales / reached
    std::optional<PriceSummary> price;
    std::vector<double> win_share; // per bidder, over this round's sales
};

struct AuctionStats {
    std::size_t n_sim = 0;
    int max_rounds = 1;
    std::uint64_t seed = 0;
    double upsilon = 0.0;
    std::vector<std::string> clubs;
    std::vector<RoundStats> rounds;
    std::size_t sales = 0;
    std::size_t unsold = 0;
    std::size_t abstained = 0; // unsold paths that ended with no bid
    double sale_probability = 0.0;
    std::optional<PriceSummary> price;
    std::vector<double> win_share;
    std::size_t lookup_entries = 0;
};

struct PathOutcome {
    bool sold = false;
    int round = 0; // 1-based round of sale or of termination
    std::size_t winner = 0;
    double price = 0.0;
    bool abstained = false;
    std::vector<double> thresholds; // rejected winning bids
};

double acceptance_probability(const AuctionSetup& setup, double tau_prev, std::size_t winner,
                              double tau);

PathOutcome simulate_path(const AuctionSetup& setup, const RoundLookup& lookup, int rounds,
                          std::uint64_t seed, std::uint64_t path);

// Called from worker threads with (paths completed, n_sim); must be thread-safe.
using SimProgressFn = std::function<void(std::size_t, std::size_t)>;

// Paths are independent streams reduced in path order, so the result does not
// depend on the thread count.
AuctionStats simulate(const AuctionSetup& setup, const RoundLookup& lookup, std::size_t n_sim,
                      std::uint64_t seed, int rounds = 0, unsigned threads = 0,
                      const SimProgressFn& progress = {});

} // namespace tfe
