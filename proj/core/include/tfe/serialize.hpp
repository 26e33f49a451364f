#pragma once
#include "tfe/auction.hpp"
#include "tfe/planner.hpp"
#include "tfe/simulation.hpp"
#include "tfe/solvers.hpp"

#include <nlohmann/json.hpp>

namespace tfe {

struct AuctionSpec {
    AuctionSetup setup;
    LookupOptions lookup;
};

AuctionSpec auction_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AuctionSetup& setup, const LookupOptions& lookup);

nlohmann::json to_json(const ObjectiveBreakdown& b);
nlohmann::json to_json(const TransferPlan& plan);
nlohmann::json to_json(const PlanReport& report);
nlohmann::json to_json(const PriceSummary& s);
nlohmann::json to_json(const AuctionStats& stats);
nlohmann::json to_json(const EquilibriumSolution& eq);
nlohmann::json to_json(const RoundLookup& lookup, bool include_tables = false);
nlohmann::json to_json(const DominanceReport& report);

// Names for the eighteen constraint rows, in order.
const std::array<const char*, kConstraintCount>& constraint_names();

} // namespace tfe
