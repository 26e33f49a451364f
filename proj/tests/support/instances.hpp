#pragma once
// Shared generators for the solver and auction suites.
#include "tfe/auction.hpp"
#include "tfe/objective.hpp"
#include "tfe/serialize.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace tfe::testing {

inline std::filesystem::path data_dir() { return TFE_SOURCE_DATA_DIR; }

inline AuctionSpec load_auction(const std::string& name) {
    return auction_spec_from_json(read_json_file(data_dir() / "auctions" / (name + ".json")));
}

// Twelve-candidate instance: six current players covering every position and
// six outside targets, with bounds loose enough that several plans are feasible.
inline Problem small_instance(std::uint64_t seed, std::size_t n_outside = 6) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto pick = [&](double lo, double hi) { return lo + (hi - lo) * U(g); };

    std::vector<Candidate> pool;
    const Position squad[6] = {Position::GK, Position::DF, Position::DF,
                               Position::MF, Position::MF, Position::FW};
    int id = 0;
    auto add = [&](bool current, Position pos) {
        Candidate c = make_candidate("C" + std::to_string(++id), current, pos, pick(19, 33),
                                     pick(6.0, 7.5), {pick(0.5, 2.5), pick(0.3, 1.1)});
        c.other_continent = U(g) < 0.25;
        c.top_league = U(g) < 0.4;
        c.local = U(g) < 0.3;
        pool.push_back(std::move(c));
    };
    for (Position p : squad) add(true, p);
    for (std::size_t k = 0; k < n_outside; ++k) add(false, kPositions[g() % 4]);

    ConstraintBounds b;
    b.k_tot_max = 9;
    b.k_retain_min = 3;
    b.k_transfer_max = 5;
    b.gk_min = 1;
    b.gk_max = 2;
    b.df_min = 1;
    b.mf_min = 1;
    b.fw_min = 1;
    b.other_continent_max = 1;
    b.budget_max = pick(15.0, 60.0);
    b.alpha = 0.05;
    return make_problem(std::move(pool), b);
}

inline AuctionSetup lognormal_setup(double reserve_mu, const std::vector<double>& mus,
                                    const std::vector<AffinitySpec>& affinities) {
    AuctionSetup st;
    st.player_id = "X";
    st.seller_club_id = "S";
    st.reserve = {reserve_mu, 1.1};
    for (std::size_t c = 0; c < mus.size(); ++c)
        st.bidders.push_back({"B" + std::to_string(c), ValuationDist::lognormal(mus[c], 1.1),
                              affinities[c]});
    return st;
}

// Randomized 2-4 bidder setups drawn around the bundled fixtures:
// reserve mu in [0.5, 1.5], valuation mu in [1.0, 1.8], sigma 1.1, logistic
// affinities within one unit of a shared centre in [2.5, 4.5].
struct RandomSetup {
    AuctionSetup setup;
    double shared_center = 0.0;
};

inline RandomSetup random_setup(std::mt19937_64& g) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    RandomSetup out;
    const double reserve_mu = 0.5 + U(g);
    const int C = 2 + static_cast<int>(U(g) * 3);
    out.shared_center = 2.5 + 2.0 * U(g);
    std::vector<double> mus;
    std::vector<AffinitySpec> aff;
    for (int c = 0; c < C; ++c) {
        mus.push_back(1.0 + 0.8 * U(g));
        aff.push_back(AffinitySpec::logistic(out.shared_center + (U(g) - 0.5) * 2.0, 1.0));
    }
    out.setup = lognormal_setup(reserve_mu, mus, aff);
    return out;
}

} // namespace tfe::testing
