#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tfe {

enum class Position { GK = 0, DF = 1, MF = 2, FW = 3 };
inline constexpr std::array<Position, 4> kPositions{Position::GK, Position::DF, Position::MF,
                                                    Position::FW};

// Accepts the short codes and the long English names, case-insensitively.
Position parse_position(std::string_view text);
std::string_view to_string(Position p);

struct ConstraintBounds {
    int k_tot_max = 30;
    int k_retain_min = 15;
    int k_transfer_max = 10;
    int gk_min = 2;
    int gk_max = 4;
    int df_min = 8;
    int mf_min = 8;
    int fw_min = 4;
    std::array<int, 4> buy_min{0, 0, 0, 0}; // indexed by Position
    int other_continent_min = 0;
    int other_continent_max = 2;
    int top_league_min = 0;
    int local_min = 0;
    double profit_min = 0.0; // millions EUR
    double budget_max = 1.0; // B_max, millions EUR
    double alpha = 0.05;

    int position_min(Position p) const;
    void validate() const;
};

struct Weights {
    double cost = 0.1;    // lambda_1
    double risk = 0.1;    // lambda_2
    double quality = 0.8; // lambda_3
};

struct Directives {
    std::vector<std::string> must_buy;
    std::vector<std::string> must_sell;
    std::vector<std::string> keep;
};

enum class Method { GA, SA, HC, Brute };
Method parse_method(std::string_view text);
std::string_view to_string(Method m);

struct SolverParams {
    Method method = Method::GA;
    int population = 60;
    int iterations = 0; // 0 = method default (GA generations, SA steps, HC steps per restart)
    int stall = 60;
    double mutation_rate = 0.0; // 0 = 1/n
    double crossover_rate = 0.9;
    int elite = 2;
    double initial_temperature = 5.0;
    double final_temperature = 0.01;
    int restarts = 20;
    double beta = 1e6;
    std::uint64_t seed = 42;

    int effective_iterations() const;
    void validate() const;
};

} // namespace tfe
