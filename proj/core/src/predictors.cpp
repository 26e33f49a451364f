#include "tfe/predictors.hpp"

#include "tfe/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tfe {
namespace {

void add_position_dummies(FeatureVector& f, Position p) {
    f["pos_DF"] = p == Position::DF ? 1.0 : 0.0;
    f["pos_MF"] = p == Position::MF ? 1.0 : 0.0;
    f["pos_FW"] = p == Position::FW ? 1.0 : 0.0;
}

double lookup(const std::map<std::string, double>& table, const std::string& key, bool& used) {
    const auto it = table.find(key);
    used = it != table.end();
    return used ? it->second : 0.0;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

FeatureVector rating_features(const PlayerRecord& player, const ClubContext& target) {
    const int pos = static_cast<int>(player.position);
    FeatureVector f{
        {"intercept", 1.0},
        {"age", player.age},
        {"height", player.height},
        {"weight", player.weight},
        {"last_rating", player.last_rating},
        {"n_transfers", player.n_transfers},
        {"same_team", player.club_id == target.club_id ? 1.0 : 0.0},
        {"same_nat", player.nationality == target.country ? 1.0 : 0.0},
        {"team_rating", target.median_rating},
        {"team_rating_pos", target.median_rating_by_position[pos]},
        {"team_depth_pos", target.depth_by_position[pos]},
    };
    add_position_dummies(f, player.position);
    return f;
}

FeatureVector fee_features(const PlayerRecord& player, const ClubContext& seller,
                           const ClubContext& buyer, double time_index) {
    const int pos = static_cast<int>(player.position);
    FeatureVector f{
        {"intercept", 1.0},
        {"trend", time_index},
        {"age", player.age},
        {"height", player.height},
        {"weight", player.weight},
        {"career_rating", player.career_rating},
        {"rating", player.last_rating},
        {"game_time", player.game_time},
        {"goals", player.goals},
        {"goal_contributions", player.goal_contributions},
        {"penalty_accuracy", player.penalty_accuracy},
        {"shots", player.shots},
        {"passing_accuracy", player.passing_accuracy},
        {"cards", player.cards},
        {"clearances", player.clearances},
        {"interceptions", player.interceptions},
        {"fee_league_seller", seller.league_median_sell_fee},
        {"fee_league_buyer", buyer.league_median_buy_fee},
        {"depth_pos_seller", seller.depth_by_position[pos]},
        {"depth_pos_buyer", buyer.depth_by_position[pos]},
        {"rating_pos_seller", seller.median_rating_by_position[pos]},
        {"rating_pos_buyer", buyer.median_rating_by_position[pos]},
        {"team_rating_seller", seller.median_rating},
        {"team_rating_buyer", buyer.median_rating},
    };
    add_position_dummies(f, player.position);
    return f;
}

FeatureVector scale_features(const CoefficientBlock& block, const FeatureVector& raw) {
    FeatureVector out = raw;
    for (const auto& [name, cs] : block.scalers) {
        auto it = out.find(name);
        if (it == out.end()) throw MissingFeature(name + " (scaler without a feature)");
        it->second = (it->second - cs.first) / cs.second;
    }
    if (block.fixed.count("age_sq")) {
        const auto it = out.find("age");
        if (it == out.end()) throw MissingFeature("age (needed for age_sq)");
        out["age_sq"] = it->second * it->second;
    }
    return out;
}

double linear_predictor(const CoefficientBlock& block, const FeatureVector& x) {
    double acc = 0.0;
    for (const auto& [name, beta] : block.fixed) {
        const auto it = x.find(name);
        if (it == x.end()) throw MissingFeature(name);
        acc += beta * it->second;
    }
    if (x.size() != block.fixed.size()) {
        for (const auto& [name, v] : x)
            if (!block.fixed.count(name)) throw MissingFeature(name + " has no coefficient");
    }
    return acc;
}

RatingForecast predict_rating(const PlayerRecord& player, const ClubContext& target,
                              const ModelCoefficients& coeffs) {
    const RatingModel& m = coeffs.rating;
    RatingForecast r;
    r.player_id = player.player_id;
    r.value = linear_predictor(m.block, scale_features(m.block, rating_features(player, target)));
    r.value += lookup(m.corridor, player.club_id + "->" + target.club_id, r.used_corridor_effect);
    r.value += lookup(m.current_league, target.league_id, r.used_current_league_effect);
    r.value += lookup(m.last_league, player.league_id, r.used_last_league_effect);
    return r;
}

LogNormalParams predict_fee(const PlayerRecord& player, const ClubContext& seller,
                            const ClubContext& buyer, double time_index,
                            const ModelCoefficients& coeffs, FeeFallbacks* fallbacks) {
    const FeeModel& m = coeffs.fee;
    double mu = linear_predictor(m.block,
                                 scale_features(m.block, fee_features(player, seller, buyer, time_index)));
    bool has_buyer = false, has_seller = false;
    mu += lookup(m.buyer, buyer.club_id, has_buyer);
    mu += lookup(m.seller, seller.club_id, has_seller);
    double s2 = m.tau2;
    if (!has_buyer) s2 += m.sigma2_buy;
    if (!has_seller) s2 += m.sigma2_sell;
    if (fallbacks) *fallbacks = {!has_buyer, !has_seller};
    return {mu, std::sqrt(s2)};
}

ClubContext external_market(const Dataset& data) {
    ClubContext m;
    m.club_id = kExternalMarketId;
    m.league_id = kExternalMarketId;
    if (data.clubs.empty()) return m;
    std::vector<double> sell, buy, ratings;
    std::array<std::vector<double>, 4> by_pos;
    std::array<double, 4> depth{};
    for (const auto& [id, c] : data.clubs) {
        sell.push_back(c.league_median_sell_fee);
        buy.push_back(c.league_median_buy_fee);
        for (int k = 0; k < 4; ++k) depth[k] += c.depth_by_position[k];
    }
    for (const auto& p : data.players) {
        ratings.push_back(p.last_rating);
        by_pos[static_cast<int>(p.position)].push_back(p.last_rating);
    }
    m.league_median_sell_fee = median_of(sell);
    m.league_median_buy_fee = median_of(buy);
    m.median_rating = ratings.empty() ? 0.0 : median_of(ratings);
    const double n_clubs = static_cast<double>(data.clubs.size());
    for (int k = 0; k < 4; ++k) {
        m.depth_by_position[k] = depth[k] / n_clubs;
        m.median_rating_by_position[k] = by_pos[k].empty() ? m.median_rating : median_of(by_pos[k]);
    }
    return m;
}

} // namespace tfe
