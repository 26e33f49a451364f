#pragma once
#include "tfe/model_io.hpp"
#include "tfe/numerics.hpp"

#include <map>
#include <string>

namespace tfe {

using FeatureVector = std::map<std::string, double>;

struct RatingForecast {
    std::string player_id;
    double value = 0.0;
    bool used_corridor_effect = false;
    bool used_current_league_effect = false;
    bool used_last_league_effect = false;
};

struct FeeFallbacks {
    bool buyer = false;  // buyer intercept unavailable, sigma2_buy added
    bool seller = false;
};

// Raw (unscaled) covariates; age_sq is derived during scaling.
FeatureVector rating_features(const PlayerRecord& player, const ClubContext& target);
FeatureVector fee_features(const PlayerRecord& player, const ClubContext& seller,
                           const ClubContext& buyer, double time_index);

// Applies (x - center) / scale per the block's scalers and appends
// age_sq = (scaled age)^2 when the block carries it.
FeatureVector scale_features(const CoefficientBlock& block, const FeatureVector& raw);

// Dot product with the fixed effects. The key set must equal the block's.
double linear_predictor(const CoefficientBlock& block, const FeatureVector& model_ready);

RatingForecast predict_rating(const PlayerRecord& player, const ClubContext& target,
                              const ModelCoefficients& coeffs);

LogNormalParams predict_fee(const PlayerRecord& player, const ClubContext& seller,
                            const ClubContext& buyer, double time_index,
                            const ModelCoefficients& coeffs, FeeFallbacks* fallbacks = nullptr);

inline double expected_fee(const LogNormalParams& p) { return p.mean(); }
inline double fee_variance(const LogNormalParams& p) { return p.variance(); }

// Buyer used to value a club's own players: no random intercept (so the
// buyer fallback variance applies) and market-average context.
inline constexpr const char* kExternalMarketId = "__market__";
ClubContext external_market(const Dataset& data);

} // namespace tfe
