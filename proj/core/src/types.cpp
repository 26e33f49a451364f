#include "tfe/types.hpp"

#include "tfe/errors.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace tfe {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

Position parse_position(std::string_view text) {
    const std::string t = lower(text);
    if (t == "gk" || t == "goalkeeper") return Position::GK;
    if (t == "df" || t == "defender") return Position::DF;
    if (t == "mf" || t == "midfielder") return Position::MF;
    if (t == "fw" || t == "forward") return Position::FW;
    throw BadEnum("unknown position '" + std::string(text) + "'");
}

std::string_view to_string(Position p) {
    switch (p) {
    case Position::GK: return "GK";
    case Position::DF: return "DF";
    case Position::MF: return "MF";
    case Position::FW: return "FW";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    const std::string t = lower(text);
    if (t == "ga") return Method::GA;
    if (t == "sa") return Method::SA;
    if (t == "hc") return Method::HC;
    if (t == "brute" || t == "brute_force") return Method::Brute;
    throw BadEnum("unknown solver method '" + std::string(text) + "'");
}

std::string_view to_string(Method m) {
    switch (m) {
    case Method::GA: return "GA";
    case Method::SA: return "SA";
    case Method::HC: return "HC";
    case Method::Brute: return "BRUTE";
    }
    return "?";
}

int ConstraintBounds::position_min(Position p) const {
    switch (p) {
    case Position::GK: return gk_min;
    case Position::DF: return df_min;
    case Position::MF: return mf_min;
    case Position::FW: return fw_min;
    }
    return 0;
}

void ConstraintBounds::validate() const {
    if (gk_min > gk_max) throw BadValue("gk_min exceeds gk_max");
    if (other_continent_min > other_continent_max)
        throw BadValue("other_continent_min exceeds other_continent_max");
    if (k_retain_min > k_tot_max) throw BadValue("k_retain_min exceeds k_tot_max");
    if (!(budget_max > 0.0)) throw BadValue("budget_max must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw BadValue("alpha must lie in (0,1)");
    if (k_tot_max < 0 || k_transfer_max < 0) throw BadValue("squad/transfer caps must be >= 0");
}

int SolverParams::effective_iterations() const {
    if (iterations > 0) return iterations;
    switch (method) {
    case Method::GA: return 300;
    case Method::SA: return 20000;
    case Method::HC: return 200;
    case Method::Brute: return 1;
    }
    return 1;
}

void SolverParams::validate() const {
    if (population <= 1) throw BadValue("population must be at least 2");
    if (iterations < 0 || stall <= 0 || restarts <= 0 || elite < 0)
        throw BadValue("solver counts must be positive");
    if (elite >= population) throw BadValue("elite count must be below the population size");
    if (mutation_rate < 0.0 || mutation_rate > 1.0) throw BadValue("mutation_rate outside [0,1]");
    if (crossover_rate < 0.0 || crossover_rate > 1.0) throw BadValue("crossover_rate outside [0,1]");
    if (!(initial_temperature > 0.0) || !(final_temperature > 0.0) ||
        final_temperature > initial_temperature)
        throw BadValue("SA temperatures must satisfy 0 < final <= initial");
    if (!(beta > 0.0)) throw BadValue("penalty beta must be positive");
}

} // namespace tfe
