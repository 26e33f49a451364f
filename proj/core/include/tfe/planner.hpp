#pragma once
#include "tfe/model_io.hpp"
#include "tfe/predictors.hpp"
#include "tfe/solvers.hpp"

#include <filesystem>
#include <optional>

namespace tfe {

struct PricedPlayer {
    std::string player_id;
    bool current = false;
    RatingForecast rating;
    LogNormalParams fee{0.0, 0.0};
    FeeFallbacks fallbacks;
};

struct PlanReport {
    TransferPlan plan;
    std::vector<PricedPlayer> priced;
    ConstraintBounds bounds; // effective bounds before directives
    int fee_buyer_fallbacks = 0;
    int fee_seller_fallbacks = 0;
};

// Prices every player in the dataset for a move to the focal club (or, for
// current members, a sale to the external market) and assembles the
// unreduced optimisation problem.
Problem build_problem(const Dataset& data, const ModelCoefficients& coeffs,
                      const ScenarioConfig& scenario, std::vector<PricedPlayer>* priced = nullptr);

// Budget and profit bounds fall back to the focal club's values when the
// scenario leaves them out.
ConstraintBounds effective_bounds(const Dataset& data, const ScenarioConfig& scenario);

// A dataset directory: players.csv, clubs.csv, coefficients.json and an
// optional default scenario.json.
struct DatasetBundle {
    Dataset data;
    ModelCoefficients coeffs;
    std::optional<nlohmann::json> scenario;
};
DatasetBundle load_dataset_bundle(const std::filesystem::path& dir);

PlanReport run_plan(const Dataset& data, const ModelCoefficients& coeffs,
                    const ScenarioConfig& scenario, const ProgressFn& progress = {});

} // namespace tfe
