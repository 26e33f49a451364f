#include "tfe/serialize.hpp"

#include "tfe/errors.hpp"

namespace tfe {
namespace {

using nlohmann::json;

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

ValuationDist valuation_from_json(const json& j) {
    const std::string kind = lower(j.value("kind", std::string("lognormal")));
    if (kind == "lognormal")
        return ValuationDist::lognormal(j.at("mu").get<double>(), j.at("sigma").get<double>());
    if (kind == "uniform")
        return ValuationDist::uniform(j.at("lower").get<double>(), j.at("upper").get<double>());
    throw BadEnum("valuation kind '" + kind + "'");
}

json to_json(const ValuationDist& v) {
    if (v.kind == ValuationDist::Kind::Uniform)
        return {{"kind", "uniform"}, {"lower", v.a}, {"upper", v.b}};
    return {{"kind", "lognormal"}, {"mu", v.a}, {"sigma", v.b}};
}

AffinitySpec affinity_from_json(const json& j) {
    const std::string kind = lower(j.value("kind", std::string("logistic")));
    if (kind == "logistic")
        return AffinitySpec::logistic(j.at("center").get<double>(), j.value("scale", 1.0));
    if (kind == "constant") return AffinitySpec::constant(j.at("level").get<double>());
    throw BadEnum("affinity kind '" + kind + "'");
}

json to_json(const AffinitySpec& a) {
    if (a.kind == AffinitySpec::Kind::Constant) return {{"kind", "constant"}, {"level", a.level}};
    return {{"kind", "logistic"}, {"center", a.center}, {"scale", a.scale}};
}

json optional_summary(const std::optional<PriceSummary>& s) {
    return s ? to_json(*s) : json(nullptr);
}

json entries_json(const std::vector<PlanEntry>& v, bool with_iqr) {
    json out = json::array();
    for (const auto& e : v) {
        json row = {{"player_id", e.player_id}, {"expected_fee", e.expected_fee}};
        if (with_iqr) row["fee_iqr"] = {e.fee_q25, e.fee_q75};
        out.push_back(row);
    }
    return out;
}

} // namespace

const std::array<const char*, kConstraintCount>& constraint_names() {
    static const std::array<const char*, kConstraintCount> names{
        "budget_chance", "squad_max",      "retain_min",      "transfer_max",  "profit_min",
        "goalkeepers",   "defenders_min",  "midfielders_min", "forwards_min",  "buy_gk_min",
        "buy_df_min",    "buy_mf_min",     "buy_fw_min",      "other_continent", "top_league_min",
        "local_min",     "average_age",    "average_rating"};
    return names;
}

AuctionSpec auction_spec_from_json(const json& j) {
    if (!j.is_object()) throw BadSetup("auction setup must be a JSON object");
    AuctionSpec spec;
    AuctionSetup& s = spec.setup;
    try {
        s.player_id = j.value("player_id", std::string{});
        s.seller_club_id = j.value("seller_club_id", std::string{});
        const json& r = j.at("reserve");
        s.reserve = {r.at("mu").get<double>(), r.at("sigma").get<double>()};
        for (const auto& b : j.at("bidders")) {
            Bidder bidder;
            bidder.club_id = b.at("club_id").get<std::string>();
            bidder.valuation = valuation_from_json(b.at("valuation"));
            bidder.affinity = b.contains("affinity") ? affinity_from_json(b.at("affinity"))
                                                     : AffinitySpec::constant(1.0);
            s.bidders.push_back(std::move(bidder));
        }
        s.upsilon_quantile = j.value("upsilon_quantile", s.upsilon_quantile);
        if (j.contains("upsilon")) s.upsilon_override = j.at("upsilon").get<double>();
        s.common_lower_support = j.value("common_lower_support", s.common_lower_support);
        s.max_rounds = j.value("max_rounds", s.max_rounds);
        if (j.contains("numerics")) {
            const json& n = j.at("numerics");
            s.grid_points = n.value("grid_points", s.grid_points);
            s.gap_floor = n.value("gap_floor", s.gap_floor);
            if (n.contains("gap_rule")) {
                const std::string g = lower(n.at("gap_rule").get<std::string>());
                if (g == "aggregate") s.gap_rule = GapRule::Aggregate;
                else if (g == "every_club") s.gap_rule = GapRule::EveryClub;
                else throw BadEnum("gap_rule '" + g + "'");
            }
            if (n.contains("numerator")) {
                const std::string g = lower(n.at("numerator").get<std::string>());
                if (g == "untruncated") s.numerator = Numerator::Untruncated;
                else if (g == "truncated") s.numerator = Numerator::Truncated;
                else throw BadEnum("numerator '" + g + "'");
            }
            s.broyden_tol = n.value("broyden_tol", s.broyden_tol);
            s.broyden_max_iter = n.value("broyden_max_iter", s.broyden_max_iter);
            s.monotone_tol = n.value("monotone_tol", s.monotone_tol);
        }
        if (j.contains("lookup")) {
            const json& l = j.at("lookup");
            spec.lookup.draws = l.value("draws", spec.lookup.draws);
            spec.lookup.seed = l.value("seed", spec.lookup.seed);
        }
    } catch (const json::exception& e) {
        throw BadSetup(e.what());
    }
    s.validate();
    return spec;
}

json to_json(const AuctionSetup& s, const LookupOptions& lookup) {
    json bidders = json::array();
    for (const auto& b : s.bidders)
        bidders.push_back({{"club_id", b.club_id},
                           {"valuation", to_json(b.valuation)},
                           {"affinity", to_json(b.affinity)}});
    json j = {{"player_id", s.player_id},
              {"seller_club_id", s.seller_club_id},
              {"reserve", {{"mu", s.reserve.mu}, {"sigma", s.reserve.sigma}}},
              {"bidders", bidders},
              {"upsilon_quantile", s.upsilon_quantile},
              {"common_lower_support", s.common_lower_support},
              {"max_rounds", s.max_rounds},
              {"numerics",
               {{"grid_points", s.grid_points},
                {"gap_floor", s.gap_floor},
                {"gap_rule", s.gap_rule == GapRule::Aggregate ? "aggregate" : "every_club"},
                {"numerator", s.numerator == Numerator::Untruncated ? "untruncated" : "truncated"},
                {"broyden_tol", s.broyden_tol},
                {"broyden_max_iter", s.broyden_max_iter},
                {"monotone_tol", s.monotone_tol}}},
              {"lookup", {{"draws", lookup.draws}, {"seed", lookup.seed}}}};
    if (s.upsilon_override) j["upsilon"] = *s.upsilon_override;
    return j;
}

json to_json(const ObjectiveBreakdown& b) {
    json v = json::object();
    for (int k = 0; k < kConstraintCount; ++k) v[constraint_names()[k]] = b.violations[k];
    return {{"cost", b.cost},       {"risk", b.risk},       {"quality", b.quality},
            {"objective", b.raw},   {"penalty", b.penalty}, {"fitness", b.fitness},
            {"violations", v}};
}

json to_json(const TransferPlan& plan) {
    json decision = json::object();
    for (const auto& [id, on] : plan.decision) decision[id] = on;
    return {{"feasible", plan.feasible},
            {"objective_units", plan.normalized ? "normalized" : "raw"},
            {"transfers", plan.transfers},
            {"squad_size", plan.squad_size},
            {"buys", entries_json(plan.buys, true)},
            {"sells", entries_json(plan.sells, false)},
            {"breakdown", to_json(plan.breakdown)},
            {"decision", decision},
            {"solver_trace",
             {{"method", std::string(to_string(plan.trace.method))},
              {"iterations", plan.trace.iterations},
              {"evaluations", plan.trace.evaluations},
              {"rerun_used", plan.trace.rerun_used},
              {"seed", plan.trace.seed}}}};
}

json to_json(const PlanReport& r) {
    json j = to_json(r.plan);
    j["metadata"] = {
        {"budget_max", r.bounds.budget_max},
        {"profit_min", r.bounds.profit_min},
        {"alpha", r.bounds.alpha},
        {"fee_sigma_rule",
         "tau2 when both club intercepts are known; the missing club's variance component is added otherwise"},
        {"fee_buyer_fallbacks", r.fee_buyer_fallbacks},
        {"fee_seller_fallbacks", r.fee_seller_fallbacks}};
    json priced = json::array();
    for (const auto& p : r.priced)
        priced.push_back({{"player_id", p.player_id},
                          {"current", p.current},
                          {"rating", p.rating.value},
                          {"fee_mu", p.fee.mu},
                          {"fee_sigma", p.fee.sigma},
                          {"expected_fee", p.fee.mean()},
                          {"corridor_effect", p.rating.used_corridor_effect},
                          {"buyer_fallback", p.fallbacks.buyer},
                          {"seller_fallback", p.fallbacks.seller}});
    j["pool"] = priced;
    return j;
}

json to_json(const PriceSummary& s) {
    return {{"n", s.n},
            {"mean", s.mean},
            {"median", s.median},
            {"sd", s.sd ? json(*s.sd) : json(nullptr)},
            {"iqr", {s.q1, s.q3}}};
}

json to_json(const AuctionStats& s) {
    json rounds = json::array();
    for (const auto& r : s.rounds) {
        json share = json::object();
        for (std::size_t c = 0; c < s.clubs.size(); ++c) share[s.clubs[c]] = r.win_share[c];
        rounds.push_back({{"round", r.round},
                          {"reached", r.reached},
                          {"sales", r.sales},
                          {"conditional_rate", r.conditional_rate},
                          {"price", optional_summary(r.price)},
                          {"win_share", share}});
    }
    json share = json::object();
    for (std::size_t c = 0; c < s.clubs.size(); ++c) share[s.clubs[c]] = s.win_share[c];
    return {{"n_sim", s.n_sim},
            {"rounds_max", s.max_rounds},
            {"seed", s.seed},
            {"upsilon", s.upsilon},
            {"lookup_entries", s.lookup_entries},
            {"sales", s.sales},
            {"unsold", s.unsold},
            {"abstained", s.abstained},
            {"sale_probability", s.sale_probability},
            {"price", optional_summary(s.price)},
            {"win_share", share},
            {"rounds", rounds}};
}

json to_json(const EquilibriumSolution& eq) {
    json psi = json::array();
    for (const auto& t : eq.psi) psi.push_back(t.ys);
    return {{"round", eq.round},
            {"tau_prev", eq.tau_prev},
            {"bid_gap", eq.bid_gap},
            {"lower_supports", eq.lower_supports},
            {"residual_norm", eq.residual_norm},
            {"iterations", eq.iterations},
            {"converged", eq.converged},
            {"monotone_ok", eq.monotone_ok},
            {"grid", eq.grid},
            {"psi", psi}};
}

json to_json(const RoundLookup& lk, bool include_tables) {
    json entries = json::array();
    for (const auto& e : lk.entries) {
        if (include_tables) {
            entries.push_back(to_json(e));
        } else {
            entries.push_back({{"tau_prev", e.tau_prev},
                               {"bid_gap", e.bid_gap},
                               {"lower_supports", e.lower_supports},
                               {"residual_norm", e.residual_norm}});
        }
    }
    json cands = json::array();
    for (const auto& c : lk.candidates)
        cands.push_back({{"tau", c.tau},
                         {"status", c.status},
                         {"lower_supports", c.lower_supports},
                         {"bid_gap", c.bid_gap},
                         {"residual_norm", c.residual_norm}});
    return {{"feasibility_cutoff", lk.feasibility_cutoff}, {"entries", entries}, {"candidates", cands}};
}

json to_json(const DominanceReport& r) {
    json methods = json::array();
    for (Method m : r.methods) methods.push_back(std::string(to_string(m)));
    json records = json::array();
    for (const auto& b : r.records)
        records.push_back({{"instance", b.instance},
                           {"method", std::string(to_string(b.method))},
                           {"lambda3", b.lambda3},
                           {"feasible", b.feasible},
                           {"cost", b.cost},
                           {"normalized_cost", b.normalized_cost},
                           {"mean_rating", b.mean_rating},
                           {"rating_improvement", b.rating_improvement},
                           {"wall_ms", b.wall_ms},
                           {"evaluations", b.evaluations}});
    return {{"methods", methods},
            {"lambda3", r.lambda3},
            {"feasible_runs", r.feasible_runs},
            {"dominance", r.dominance},
            {"shared_feasible", r.shared},
            {"records", records}};
}

} // namespace tfe
