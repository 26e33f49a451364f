#include "support/instances.hpp"
#include "tfe/auction.hpp"
#include "tfe/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tfe;

namespace {

const AuctionSpec& almiron() {
    static const AuctionSpec s = tfe::testing::load_auction("almiron");
    return s;
}

const EquilibriumSolution& almiron_round_one() {
    static const EquilibriumSolution eq = solve_round_one(almiron().setup);
    return eq;
}

} // namespace

TEST(Setup, UpsilonIsReserveQuantile) {
    EXPECT_NEAR(almiron().setup.upsilon(), 27.36702960187528, 1e-9);
    EXPECT_NEAR(tfe::testing::load_auction("traore").setup.upsilon(), 12.29679906197596, 1e-9);
    AuctionSetup st = almiron().setup;
    st.upsilon_override = 10.0;
    EXPECT_DOUBLE_EQ(st.upsilon(), 10.0);
}

TEST(Setup, ValidationCatchesBadInput) {
    AuctionSetup st = almiron().setup;
    st.bidders.clear();
    EXPECT_THROW(st.validate(), BadSetup);
    st = almiron().setup;
    st.common_lower_support = 30.0;
    EXPECT_THROW(st.validate(), BadSetup);
    st = almiron().setup;
    st.bidders[0].valuation = ValuationDist::uniform(2.0, 1.0);
    EXPECT_THROW(st.validate(), BadSetup);
}

TEST(ReserveWindow, TruncatedCdfReference) {
    const AuctionSetup& st = almiron().setup;
    EXPECT_NEAR(truncated_reserve_cdf(st, 4.207, 8.0), 0.4731140667633927, 1e-12);
    EXPECT_NEAR(truncated_reserve_cdf(st, 4.207, st.upsilon()), 1.0, 1e-15);
    EXPECT_THROW(truncated_reserve_cdf(st, 4.207, 4.0), OutOfWindow);
    EXPECT_THROW(truncated_reserve_cdf(st, 4.207, 30.0), OutOfWindow);
}

TEST(ReserveWindow, HazardMatchesDefinition) {
    const AuctionSetup& st = almiron().setup;
    const LogNormalParams& H = st.reserve;
    for (double tau : {0.0, 3.0, 8.0})
        for (double b : {tau + 0.7, tau + 2.0, tau + 5.0}) {
            const double expect = H.pdf(b) / (H.cdf(b) - H.cdf(tau));
            EXPECT_NEAR(truncated_reserve_hazard(st, tau, b), expect, 1e-12 * expect);
        }
    // The hazard falls as the bid moves away from the previous rejection.
    EXPECT_GT(truncated_reserve_hazard(st, 5.0, 5.5), truncated_reserve_hazard(st, 5.0, 7.0));
    EXPECT_THROW(truncated_reserve_hazard(st, 5.0, 5.0), OutOfWindow);
}

TEST(Affinity, TruncatedAtUpsilon) {
    const AuctionSetup& st = almiron().setup;
    EXPECT_DOUBLE_EQ(truncated_affinity(st, 1, st.upsilon()), 1.0);
    EXPECT_DOUBLE_EQ(truncated_affinity(st, 1, st.upsilon() + 5.0), 1.0);
    const double raw = st.bidders[1].affinity.value(5.3) / st.bidders[1].affinity.value(st.upsilon());
    EXPECT_DOUBLE_EQ(truncated_affinity(st, 1, 5.3), raw);
}

// Root of the aggregate bracket at the common lower support, from scipy
// brentq on the same expression; it sits just above the 0.7 floor.
TEST(BidGap, AlmironRoundOneReference) {
    const AuctionSetup& st = almiron().setup;
    const std::vector<double> sl(st.size(), st.common_lower_support);
    EXPECT_NEAR(compute_bid_gap(st, 0.0, sl), 0.7189390033117306, 1e-4);
}

TEST(BidGap, FloorBindsWhenBracketTurnsPositiveEarly) {
    AuctionSetup st = almiron().setup;
    st.gap_floor = 0.9;
    const std::vector<double> sl(st.size(), st.common_lower_support);
    EXPECT_DOUBLE_EQ(compute_bid_gap(st, 0.0, sl), 0.9);
}

TEST(BidGap, EmptyWindowHasNoGap) {
    const AuctionSetup& st = almiron().setup;
    const std::vector<double> sl(st.size(), st.upsilon());
    EXPECT_THROW(compute_bid_gap(st, st.upsilon() - 0.5, sl), NoFeasibleGap);
}

TEST(Equilibrium, AlmironRoundOneIsAcceptedAndSatisfiesFoc) {
    const EquilibriumSolution& eq = almiron_round_one();
    EXPECT_TRUE(eq.converged);
    EXPECT_TRUE(eq.monotone_ok);
    EXPECT_EQ(eq.grid.size(), 80u);
    EXPECT_DOUBLE_EQ(eq.grid.front(), eq.bid_gap);
    EXPECT_NEAR(eq.bid_gap, 0.7189390033117306, 1e-4);
    EXPECT_NEAR(eq.grid.back(), almiron().setup.upsilon(), 1e-9);
    EXPECT_LE(eq.residual_norm, 1e-8);
    EXPECT_LE(foc_residual(almiron().setup, eq), 1e-6);
    for (std::size_t c = 0; c < eq.psi.size(); ++c) {
        EXPECT_DOUBLE_EQ(eq.psi[c].ys.front(), eq.lower_supports[c]);
        // never bid above one's own valuation
        for (std::size_t n = 0; n < eq.grid.size(); ++n) EXPECT_GE(eq.psi[c].ys[n], eq.grid[n] - 1e-9);
    }
}

TEST(Equilibrium, BidsAreMonotoneInValuation) {
    const EquilibriumSolution& eq = almiron_round_one();
    for (std::size_t c = 0; c < eq.psi.size(); ++c) {
        double prev = 0.0;
        for (double s = 1.0; s < 60.0; s += 0.5) {
            const auto b = eq.bid(c, s);
            if (!b) continue;
            EXPECT_GE(*b, prev);
            prev = *b;
        }
    }
    EXPECT_FALSE(eq.bid(0, 0.5).has_value()); // below the common lower support
}

TEST(Equilibrium, IdenticalBiddersBidIdentically) {
    const auto a = AffinitySpec::logistic(3.5, 1.0);
    const AuctionSetup st = tfe::testing::lognormal_setup(1.0, {1.4, 1.4, 1.4}, {a, a, a});
    const EquilibriumSolution eq = solve_round_one(st);
    ASSERT_TRUE(eq.accepted());
    for (std::size_t n = 0; n < eq.grid.size(); ++n) {
        EXPECT_NEAR(eq.psi[1].ys[n], eq.psi[0].ys[n], 1e-7);
        EXPECT_NEAR(eq.psi[2].ys[n], eq.psi[0].ys[n], 1e-7);
    }
}

TEST(Equilibrium, SymmetricUniformOracle) {
    // Two U(0,1) bidders, flat affinity, reserve concentrated near zero:
    // the equilibrium bid is s/2.
    AuctionSetup st;
    st.player_id = "U";
    st.seller_club_id = "S";
    st.reserve = {std::log(1e-3), 0.1};
    st.upsilon_override = 0.45;
    st.gap_floor = 0.05;
    st.common_lower_support = 0.1;
    for (int c = 0; c < 2; ++c)
        st.bidders.push_back({"B" + std::to_string(c), ValuationDist::uniform(0.0, 1.0), AffinitySpec::constant(1.0)});
    const EquilibriumSolution eq = solve_round_one(st);
    ASSERT_TRUE(eq.converged);
    for (double s = 0.15; s <= 0.85; s += 0.05) {
        const auto b = eq.bid(0, s);
        ASSERT_TRUE(b.has_value()) << s;
        EXPECT_NEAR(*b, s / 2.0, 1e-6) << s;
    }
}

TEST(Equilibrium, ConstantAffinityLevelDoesNotMatter) {
    const AuctionSetup a = tfe::testing::lognormal_setup(1.0, {1.3, 1.6}, {AffinitySpec::constant(1.0), AffinitySpec::constant(1.0)});
    const AuctionSetup b = tfe::testing::lognormal_setup(1.0, {1.3, 1.6}, {AffinitySpec::constant(0.4), AffinitySpec::constant(0.4)});
    const EquilibriumSolution ea = solve_round_one(a), eb = solve_round_one(b);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t n = 0; n < ea.grid.size(); ++n) EXPECT_DOUBLE_EQ(ea.psi[c].ys[n], eb.psi[c].ys[n]);
}

TEST(SingleBidder, MaximisesExpectedUtility) {
    AuctionSetup st = tfe::testing::lognormal_setup(1.5, {1.7}, {AffinitySpec::logistic(4.3, 1.0)});
    for (double s : {5.0, 10.0, 20.0}) {
        const auto b = bid_single(st, 0.0, s);
        ASSERT_TRUE(b.has_value());
        auto u = [&](double x) {
            return (s - x) * truncated_affinity(st, 0, x) * truncated_reserve_cdf(st, 0.0, x);
        };
        double best = 0.0;
        for (double x = 0.7; x <= std::min(s, st.upsilon()); x += 1e-3) best = std::max(best, u(x));
        EXPECT_GE(u(*b), best - 1e-6);
        EXPECT_LT(*b, s);
    }
    EXPECT_FALSE(bid_single(st, 0.0, 0.5).has_value());
    EXPECT_FALSE(bid_single(st, 10.0, 10.5).has_value());
}

TEST(Allocation, ProbabilityIsBoundedAndIncreasing) {
    const AuctionSetup& st = almiron().setup;
    const EquilibriumSolution& eq = almiron_round_one();
    for (std::size_t c = 0; c < st.size(); ++c) {
        double prev = -1.0;
        for (std::size_t n = 0; n < eq.grid.size(); n += 4) {
            const double q = allocation_probability(eq, st, c, eq.grid[n]);
            EXPECT_GE(q, 0.0);
            EXPECT_LE(q, 1.0);
            EXPECT_GE(q, prev - 1e-12);
            prev = q;
        }
        // at upsilon the seller accepts for sure; only rival bids remain
        double rivals = 1.0;
        for (std::size_t j = 0; j < st.size(); ++j)
            if (j != c) rivals *= st.bidders[j].valuation.cdf(eq.psi[j].ys.back());
        EXPECT_NEAR(allocation_probability(eq, st, c, eq.grid.back()), rivals, 1e-12);
    }
    EXPECT_THROW(allocation_probability(eq, st, 0, 0.1), OutOfWindow);
}

TEST(Lookup, SingleRoundHoldsOneEntry) {
    const RoundLookup lk = single_round_lookup(almiron().setup);
    ASSERT_EQ(lk.entries.size(), 1u);
    EXPECT_DOUBLE_EQ(lk.entries[0].tau_prev, 0.0);
    EXPECT_EQ(&lk.select(12.0), &lk.entries[0]);
    EXPECT_NEAR(lk.feasibility_cutoff, 0.95 * almiron().setup.upsilon(), 1e-12);
    EXPECT_THROW(RoundLookup{}.select(1.0), EmptyLookup);
}

TEST(Lookup, AlmironEntriesAscendAndSelectFloor) {
    const RoundLookup lk = build_lookup(almiron().setup, almiron().lookup);
    ASSERT_GE(lk.entries.size(), 2u);
    for (std::size_t k = 1; k < lk.entries.size(); ++k) {
        EXPECT_GT(lk.entries[k].tau_prev, lk.entries[k - 1].tau_prev);
        EXPECT_TRUE(lk.entries[k].accepted());
    }
    EXPECT_FALSE(lk.candidates.empty());
    const auto& second = lk.entries[1];
    EXPECT_EQ(&lk.select(second.tau_prev), &second);
    EXPECT_EQ(&lk.select(second.tau_prev - 1e-6), &lk.entries[0]);
    for (const auto& cand : lk.candidates) {
        if (cand.status == "accepted") EXPECT_LT(cand.tau, lk.feasibility_cutoff);
    }
}

TEST(Lookup, Reproducible) {
    const RoundLookup a = build_lookup(almiron().setup, almiron().lookup);
    const RoundLookup b = build_lookup(almiron().setup, almiron().lookup);
    ASSERT_EQ(a.candidates.size(), b.candidates.size());
    for (std::size_t k = 0; k < a.candidates.size(); ++k) {
        EXPECT_EQ(a.candidates[k].tau, b.candidates[k].tau);
        EXPECT_EQ(a.candidates[k].status, b.candidates[k].status);
    }
}
