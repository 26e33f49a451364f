#pragma once
#include "tfe/types.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tfe {

struct PlayerRecord {
    std::string player_id;
    std::string name;
    Position position = Position::MF;
    double age = 0.0;
    double height = 0.0; // cm
    double weight = 0.0; // kg
    std::string nationality;
    std::string club_id;
    std::string prev_club_id;
    std::string league_id;
    std::string prev_league_id;
    double last_rating = 0.0;
    double career_rating = 0.0;
    double game_time = 0.0; // hundreds of minutes
    double goals = 0.0;
    double goal_contributions = 0.0;
    double penalty_accuracy = 0.0;
    double shots = 0.0;
    double passing_accuracy = 0.0; // percent
    double cards = 0.0;            // yellows + 2 * reds
    double clearances = 0.0;
    double interceptions = 0.0;
    double n_transfers = 0.0;
    bool transfer_listed = false;
};

struct ClubContext {
    std::string club_id;
    std::string league_id;
    std::string country;
    std::string continent;
    bool top_league = false;
    std::vector<std::string> member_ids;
    double median_rating = 0.0;
    std::array<double, 4> median_rating_by_position{};
    std::array<double, 4> depth_by_position{};
    double league_median_sell_fee = 0.0;
    double league_median_buy_fee = 0.0;
    double budget_max = 0.0;
    double profit_min = 0.0;
    double avg_age = 0.0;
    double avg_rating = 0.0;
};

// Static club attributes as stored on disk; squad aggregates are derived.
struct ClubRow {
    std::string club_id;
    std::string league_id;
    std::string country;
    std::string continent;
    bool top_league = false;
    double league_median_sell_fee = 0.0;
    double league_median_buy_fee = 0.0;
    double budget_max = 0.0;
    double profit_min = 0.0;
};

struct Dataset {
    std::vector<PlayerRecord> players;
    std::map<std::string, ClubContext> clubs;

    const ClubContext& club(const std::string& id) const;
};

struct CoefficientBlock {
    std::map<std::string, double> fixed;
    std::map<std::string, std::pair<double, double>> scalers; // name -> (center, scale)
};

struct RatingModel {
    CoefficientBlock block;
    std::map<std::string, double> corridor; // "prev_club->club"
    std::map<std::string, double> current_league;
    std::map<std::string, double> last_league;
    double sigma2 = 0.0, sigma2_club = 0.0, sigma2_cur = 0.0, sigma2_last = 0.0;
};

struct FeeModel {
    CoefficientBlock block;
    std::map<std::string, double> buyer;
    std::map<std::string, double> seller;
    double tau2 = 0.0, sigma2_buy = 0.0, sigma2_sell = 0.0;
};

struct ModelCoefficients {
    RatingModel rating;
    FeeModel fee;
    std::string fee_units = "log-millions-EUR";
};

struct ScenarioConfig {
    std::string focal_club;
    Weights lambda;
    double alpha = 0.05;
    ConstraintBounds bounds;
    bool budget_given = false; // B_max supplied rather than taken from the club
    bool profit_given = false;
    Directives directives;
    SolverParams solver;
    std::map<std::string, double> resale_prices;
    bool normalize = false;
    double time_index = 0.0;
};

inline constexpr const char* kFeeUnits = "log-millions-EUR";

// Fixed-effect names each model accepts; one feature builder per name.
const std::vector<std::string>& rating_feature_names();
const std::vector<std::string>& fee_feature_names();

// CSV column order used for reading and writing player tables.
const std::vector<std::string>& player_columns();
const std::vector<std::string>& club_columns();

std::vector<PlayerRecord> load_player_table(std::istream& in);
std::vector<PlayerRecord> load_player_table(const std::filesystem::path& file);
std::string write_player_table(const std::vector<PlayerRecord>& players);

std::vector<ClubRow> load_club_table(std::istream& in);
std::vector<ClubRow> load_club_table(const std::filesystem::path& file);

Dataset build_dataset(std::vector<PlayerRecord> players, const std::vector<ClubRow>& clubs);

ModelCoefficients load_coefficients(const nlohmann::json& j);
ModelCoefficients load_coefficients(const std::filesystem::path& file);
nlohmann::json to_json(const ModelCoefficients& c);

ScenarioConfig load_scenario_config(const nlohmann::json& j);
ScenarioConfig load_scenario_config(const std::filesystem::path& file);
nlohmann::json to_json(const ScenarioConfig& s);

nlohmann::json read_json_file(const std::filesystem::path& file);

} // namespace tfe
