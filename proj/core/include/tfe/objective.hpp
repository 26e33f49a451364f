#pragma once
#include "tfe/numerics.hpp"
#include "tfe/types.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace tfe {

// One pool player with everything the objective and constraints consume.
struct Candidate {
    std::string player_id;
    bool current = false; // member of the focal squad
    Position position = Position::MF;
    double age = 0.0;
    double rating = 0.0; // forecast at the focal club
    LogNormalParams fee{0.0, 0.0};
    double expected_fee = 0.0;
    double fee_variance = 0.0;
    double resale = 0.0; // r_i, only meaningful for current players
    bool other_continent = false;
    bool top_league = false; // plays in another top league
    bool local = false;      // plays in the focal club's country
};

Candidate make_candidate(std::string id, bool current, Position pos, double age, double rating,
                         LogNormalParams fee);

struct SquadStats {
    double avg_age = 0.0;
    double avg_rating = 0.0;
    int size = 0;
};

// Contributions of players whose decision was fixed by directives.
struct FixedPart {
    int count = 0; // fixed players in the final squad
    int transfers = 0;
    double age_sum = 0.0;
    double rating_sum = 0.0;
    double cost = 0.0;
    double buy_mean = 0.0;
    double buy_var = 0.0;
};

using Decision = std::vector<std::uint8_t>;

inline constexpr int kConstraintCount = 18;
using Violations = std::array<double, kConstraintCount>;

// Residuals below this are treated as rounding noise.
inline constexpr double kViolationSnap = 1e-9;

struct Problem {
    std::vector<Candidate> pool;
    ConstraintBounds bounds; // already adjusted for fixed players
    FixedPart fixed;
    SquadStats squad;
    bool normalize = false;
    double cost_scale = 1.0;    // B_max of the unreduced problem
    double quality_scale = 1.0; // k_tot_max * max pool rating of the unreduced problem

    // Set by preprocess: the unreduced problem and how to rebuild its decision.
    std::shared_ptr<const Problem> parent;
    std::vector<std::size_t> parent_index;                      // per pool entry
    std::vector<std::pair<std::size_t, std::uint8_t>> fixed_assignments; // parent index -> x

    void validate() const;
    Decision status_quo() const;
    Decision expand(const Decision& x) const; // decision over the unreduced pool
    const Problem& root() const { return parent ? *parent : *this; }
};

// Builds an unreduced problem and fills the normalization scales.
Problem make_problem(std::vector<Candidate> pool, ConstraintBounds bounds, bool normalize = false);

struct ObjectiveBreakdown {
    double cost = 0.0;
    double risk = 0.0;
    double quality = 0.0;
    double raw = 0.0; // weighted objective without penalties
    Violations violations{};
    double penalty = 0.0; // sum of violations
    double fitness = 0.0;

    bool feasible() const { return penalty == 0.0; }
};

double compute_cost(const Problem& p, const Decision& x);
double compute_risk(const Problem& p, const Decision& x);
double compute_quality(const Problem& p, const Decision& x);
Violations evaluate_constraints(const Problem& p, const Decision& x);
ObjectiveBreakdown fitness(const Problem& p, const Decision& x, const Weights& w, double beta);

int squad_size(const Problem& p, const Decision& x);
int transfer_count(const Problem& p, const Decision& x);

} // namespace tfe
