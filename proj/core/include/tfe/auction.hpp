#pragma once
#include "tfe/numerics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tfe {

// Private valuation distribution of one bidder. Log-normal is the model; the
// uniform kind exists so the closed-form symmetric benchmark can be run
// through the same machinery.
struct ValuationDist {
    enum class Kind { LogNormal, Uniform };
    Kind kind = Kind::LogNormal;
    double a = 0.0; // mu | lower
    double b = 1.0; // sigma | upper

    static ValuationDist lognormal(double mu, double sigma) { return {Kind::LogNormal, mu, sigma}; }
    static ValuationDist uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }

    double cdf(double s) const;
    double pdf(double s) const;
    double sample(double standard_normal, double unit_uniform) const;
};

struct Bidder {
    std::string club_id;
    ValuationDist valuation;
    AffinitySpec affinity;
};

// How the ODE numerator treats the round's lower support.
enum class Numerator { Untruncated, Truncated };
// Which positivity test defines the bid gap.
enum class GapRule { Aggregate, EveryClub };

struct AuctionSetup {
    std::string player_id;
    std::string seller_club_id;
    LogNormalParams reserve;
    std::vector<Bidder> bidders;
    double upsilon_quantile = 0.95;
    std::optional<double> upsilon_override;
    double common_lower_support = 1.0;
    int max_rounds = 5;

    int grid_points = 80;
    double gap_floor = 0.7;
    GapRule gap_rule = GapRule::Aggregate;
    Numerator numerator = Numerator::Untruncated;
    double broyden_tol = 1e-8;
    int broyden_max_iter = 500;
    double monotone_tol = 1e-5;

    double upsilon() const;
    std::size_t size() const { return bidders.size(); }
    void validate() const;
};

struct EquilibriumSolution {
    int round = 1;
    double tau_prev = 0.0;
    double bid_gap = 0.0;
    std::vector<double> grid;
    // psi[c]: bid grid -> valuation (the inverse bidding function)
    std::vector<MonotoneTable> psi;
    std::vector<double> lower_supports;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    bool monotone_ok = false;
    // largest drop psi(b_{n-1}) - psi(b_n): at the first step / beyond it
    double boundary_decrease = 0.0;
    double interior_decrease = 0.0;

    bool accepted() const { return converged && monotone_ok; }
    // Bid of club c at valuation s; nullopt = abstain.
    std::optional<double> bid(std::size_t c, double s) const;
};

// Reserve CDF truncated to (tau_prev, upsilon] and its hazard.
double truncated_reserve_cdf(const AuctionSetup& setup, double tau_prev, double b);
double truncated_reserve_hazard(const AuctionSetup& setup, double tau_prev, double b);
// Affinity truncated at upsilon: min(p(b)/p(upsilon), 1).
double truncated_affinity(const AuctionSetup& setup, std::size_t club, double b);

// Per-club bracket of the equilibrium ODE at bid b given valuations psi.
std::vector<double> ode_bracket(const AuctionSetup& setup, double tau_prev, double b,
                                const std::vector<double>& psi);

double compute_bid_gap(const AuctionSetup& setup, double tau_prev,
                       const std::vector<double>& lower_supports);

// Solves the collocation system; never throws for numerical failure, the
// flags on the returned solution say what happened.
EquilibriumSolution solve_equilibrium_unchecked(const AuctionSetup& setup, double tau_prev,
                                                const std::vector<double>& lower_supports,
                                                int round = 1);
// Throws NoConvergence / NonMonotoneSolution.
EquilibriumSolution solve_equilibrium(const AuctionSetup& setup, double tau_prev,
                                      const std::vector<double>& lower_supports, int round = 1);
EquilibriumSolution solve_round_one(const AuctionSetup& setup);

// Residual of the undifferentiated first-order conditions at interior nodes.
double foc_residual(const AuctionSetup& setup, const EquilibriumSolution& eq);

std::optional<double> bid_single(const AuctionSetup& setup, double tau_prev, double s);

double allocation_probability(const EquilibriumSolution& eq, const AuctionSetup& setup,
                              std::size_t club, double b);

struct LookupCandidate {
    double tau = 0.0;
    std::string status; // accepted | nonmonotone | noconvergence | infeasible | nogap
    std::vector<double> lower_supports;
    double bid_gap = 0.0;
    double residual_norm = 0.0;
};

struct RoundLookup {
    std::vector<EquilibriumSolution> entries; // ascending tau_prev; entries[0] is round 1
    std::vector<LookupCandidate> candidates;
    double feasibility_cutoff = 0.0; // 0.95 * upsilon

    const EquilibriumSolution& select(double tau_prev) const;
};

struct LookupOptions {
    int draws = 300;
    std::uint64_t seed = 7;
};

RoundLookup build_lookup(const AuctionSetup& setup, const LookupOptions& opts = {});
// Lookup holding only the round-one entry (single-round model).
RoundLookup single_round_lookup(const AuctionSetup& setup);

} // namespace tfe
