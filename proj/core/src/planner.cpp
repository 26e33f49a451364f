#include "tfe/planner.hpp"

#include "tfe/errors.hpp"

#include <algorithm>

namespace tfe {

ConstraintBounds effective_bounds(const Dataset& data, const ScenarioConfig& scenario) {
    const ClubContext& focal = data.club(scenario.focal_club);
    ConstraintBounds b = scenario.bounds;
    if (!scenario.budget_given) b.budget_max = focal.budget_max;
    if (!scenario.profit_given) b.profit_min = focal.profit_min;
    b.alpha = scenario.alpha;
    b.validate();
    return b;
}

Problem build_problem(const Dataset& data, const ModelCoefficients& coeffs,
                      const ScenarioConfig& scenario, std::vector<PricedPlayer>* priced) {
    const ClubContext& focal = data.club(scenario.focal_club);
    const ClubContext market = external_market(data);
    for (const auto& [id, price] : scenario.resale_prices) {
        (void)price;
        const bool known = std::any_of(data.players.begin(), data.players.end(),
                                       [&](const PlayerRecord& p) { return p.player_id == id; });
        if (!known) throw BadValue("resale price for unknown player " + id);
    }

    std::vector<Candidate> pool;
    pool.reserve(data.players.size());
    for (const auto& player : data.players) {
        const bool current = player.club_id == focal.club_id;
        const ClubContext& home = data.club(player.club_id);
        PricedPlayer pp;
        pp.player_id = player.player_id;
        pp.current = current;
        pp.rating = predict_rating(player, focal, coeffs);
        pp.fee = current ? predict_fee(player, focal, market, scenario.time_index, coeffs, &pp.fallbacks)
                         : predict_fee(player, home, focal, scenario.time_index, coeffs, &pp.fallbacks);

        Candidate c = make_candidate(player.player_id, current, player.position, player.age,
                                     pp.rating.value, pp.fee);
        if (!current) {
            c.other_continent = home.continent != focal.continent;
            c.top_league = home.top_league && home.league_id != focal.league_id;
            c.local = home.country == focal.country;
        } else if (const auto it = scenario.resale_prices.find(player.player_id);
                   it != scenario.resale_prices.end()) {
            c.resale = it->second;
        }
        pool.push_back(std::move(c));
        if (priced) priced->push_back(std::move(pp));
    }
    return make_problem(std::move(pool), effective_bounds(data, scenario), scenario.normalize);
}

DatasetBundle load_dataset_bundle(const std::filesystem::path& dir) {
    DatasetBundle b;
    b.data = build_dataset(load_player_table(dir / "players.csv"), load_club_table(dir / "clubs.csv"));
    b.coeffs = load_coefficients(dir / "coefficients.json");
    if (std::filesystem::exists(dir / "scenario.json")) b.scenario = read_json_file(dir / "scenario.json");
    return b;
}

PlanReport run_plan(const Dataset& data, const ModelCoefficients& coeffs,
                    const ScenarioConfig& scenario, const ProgressFn& progress) {
    PlanReport report;
    const Problem full = build_problem(data, coeffs, scenario, &report.priced);
    report.bounds = full.bounds;
    for (const auto& p : report.priced) {
        report.fee_buyer_fallbacks += p.fallbacks.buyer;
        report.fee_seller_fallbacks += p.fallbacks.seller;
    }
    const Problem reduced = preprocess(full, scenario.directives);
    report.plan = solve(reduced, scenario.lambda, scenario.solver, progress);
    return report;
}

} // namespace tfe
