#include "tfe/model_io.hpp"

#include "tfe/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tfe {
namespace {

using nlohmann::json;

// RFC-4180-ish: quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(std::move(field));
    return out;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    return out + "\"";
}

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip form
    return std::string(buf, res.ptr);
}

class CsvTable {
public:
    CsvTable(std::istream& in, const std::vector<std::string>& required) {
        std::string line;
        if (!std::getline(in, line)) throw MissingColumn("empty table, no header row");
        const auto header = split_csv_line(line);
        for (std::size_t i = 0; i < header.size(); ++i) index_[trim(header[i])] = i;
        for (const auto& col : required)
            if (!index_.count(col)) throw MissingColumn(col);
        std::size_t row = 1;
        while (std::getline(in, line)) {
            ++row;
            if (trim(line).empty()) continue;
            auto fields = split_csv_line(line);
            if (fields.size() != header.size())
                throw BadValue("row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
            for (auto& f : fields) f = trim(std::move(f));
            rows_.push_back(std::move(fields));
            row_numbers_.push_back(row);
        }
    }

    std::size_t size() const { return rows_.size(); }
    std::size_t line_of(std::size_t r) const { return row_numbers_[r]; }

    const std::string& text(std::size_t r, const std::string& col) const {
        return rows_[r][index_.at(col)];
    }

    double number(std::size_t r, const std::string& col) const {
        const std::string& s = text(r, col);
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
            throw BadValue("row " + std::to_string(line_of(r)) + ", column " + col +
                           ": not a finite number '" + s + "'");
        return v;
    }

    bool flag(std::size_t r, const std::string& col) const {
        std::string s = text(r, col);
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        if (s == "1" || s == "true" || s == "yes") return true;
        if (s == "0" || s == "false" || s == "no" || s.empty()) return false;
        throw BadEnum("row " + std::to_string(line_of(r)) + ", column " + col + ": '" + s + "'");
    }

private:
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> row_numbers_;
};

std::ifstream open_or_throw(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw BadValue("cannot open " + file.string());
    return in;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw MissingCoefficient(where + "." + key);
    return j.at(key);
}

double variance_component(const json& block, const char* key, const std::string& where) {
    const json& v = require(block, key, where);
    if (!v.is_number()) throw BadValue(where + "." + key + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw BadValue(where + "." + key + " is not finite");
    if (x < 0.0) throw NegativeVariance(where + "." + key + " = " + fmt_double(x));
    return x;
}

std::map<std::string, double> number_map(const json& j, const std::string& where) {
    std::map<std::string, double> out;
    if (j.is_null()) return out;
    if (!j.is_object()) throw BadValue(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw BadValue(where + "." + k + " must be a number");
        out[k] = v.get<double>();
    }
    return out;
}

CoefficientBlock load_block(const json& model, const std::vector<std::string>& names,
                            const std::string& where) {
    CoefficientBlock b;
    b.fixed = number_map(require(model, "fixed", where), where + ".fixed");
    const std::set<std::string> known(names.begin(), names.end());
    for (const auto& [k, v] : b.fixed)
        if (!known.count(k)) throw MissingFeature(where + ".fixed." + k + " has no feature builder");
    for (const auto& n : names)
        if (!b.fixed.count(n)) throw MissingCoefficient(where + ".fixed." + n);
    if (model.contains("scalers")) {
        for (const auto& [k, v] : model.at("scalers").items()) {
            if (!v.is_array() || v.size() != 2)
                throw BadValue(where + ".scalers." + k + " must be [center, scale]");
            const double c = v[0].get<double>(), s = v[1].get<double>();
            if (s == 0.0 || !std::isfinite(s) || !std::isfinite(c))
                throw BadValue(where + ".scalers." + k + " needs a finite nonzero scale");
            if (k == "intercept" || k == "age_sq")
                throw BadValue(where + ".scalers." + k + " cannot be scaled");
            b.scalers[k] = {c, s};
        }
    }
    return b;
}

json block_to_json(const CoefficientBlock& b) {
    json scalers = json::object();
    for (const auto& [k, cs] : b.scalers) scalers[k] = {cs.first, cs.second};
    return {{"fixed", b.fixed}, {"scalers", scalers}};
}

int get_int(const json& j, const char* key, int fallback) {
    return j.contains(key) ? j.at(key).get<int>() : fallback;
}

double get_double(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

std::vector<std::string> id_list(const json& j, const char* key) {
    if (!j.contains(key)) return {};
    return j.at(key).get<std::vector<std::string>>();
}

} // namespace

const std::vector<std::string>& rating_feature_names() {
    static const std::vector<std::string> names{
        "intercept",   "age",         "age_sq",      "pos_DF",      "pos_MF",
        "pos_FW",      "height",      "weight",      "last_rating", "n_transfers",
        "same_team",   "same_nat",    "team_rating", "team_rating_pos", "team_depth_pos"};
    return names;
}

const std::vector<std::string>& fee_feature_names() {
    static const std::vector<std::string> names{
        "intercept",          "trend",            "age",               "age_sq",
        "pos_DF",             "pos_MF",           "pos_FW",            "height",
        "weight",             "career_rating",    "rating",            "game_time",
        "goals",              "goal_contributions", "penalty_accuracy", "shots",
        "passing_accuracy",   "cards",            "clearances",        "interceptions",
        "fee_league_seller",  "fee_league_buyer", "depth_pos_seller",  "depth_pos_buyer",
        "rating_pos_seller",  "rating_pos_buyer", "team_rating_seller", "team_rating_buyer"};
    return names;
}

const std::vector<std::string>& player_columns() {
    static const std::vector<std::string> cols{
        "player_id",        "name",          "position",       "age",
        "height",           "weight",        "nationality",    "club_id",
        "prev_club_id",     "league_id",     "prev_league_id", "last_rating",
        "career_rating",    "game_time",     "goals",          "goal_contributions",
        "penalty_accuracy", "shots",         "passing_accuracy", "yellow_cards",
        "red_cards",        "clearances",    "interceptions",  "n_transfers",
        "transfer_listed"};
    return cols;
}

const std::vector<std::string>& club_columns() {
    static const std::vector<std::string> cols{
        "club_id",    "league_id",  "country",    "continent", "top_league",
        "league_median_sell_fee", "league_median_buy_fee", "budget_max", "profit_min"};
    return cols;
}

std::vector<PlayerRecord> load_player_table(std::istream& in) {
    const CsvTable t(in, player_columns());
    std::vector<PlayerRecord> out;
    out.reserve(t.size());
    std::set<std::string> seen;
    for (std::size_t r = 0; r < t.size(); ++r) {
        const std::string at = "row " + std::to_string(t.line_of(r));
        PlayerRecord p;
        p.player_id = t.text(r, "player_id");
        if (p.player_id.empty()) throw BadValue(at + ": empty player_id");
        if (!seen.insert(p.player_id).second) throw BadValue(at + ": duplicate player_id " + p.player_id);
        p.name = t.text(r, "name");
        try {
            p.position = parse_position(t.text(r, "position"));
        } catch (const BadEnum&) {
            throw BadEnum(at + ": position '" + t.text(r, "position") + "'");
        }
        p.age = t.number(r, "age");
        if (!(p.age > 0.0)) throw NonPositiveAge(at + ": age " + t.text(r, "age"));
        p.height = t.number(r, "height");
        p.weight = t.number(r, "weight");
        p.nationality = t.text(r, "nationality");
        p.club_id = t.text(r, "club_id");
        p.prev_club_id = t.text(r, "prev_club_id");
        p.league_id = t.text(r, "league_id");
        p.prev_league_id = t.text(r, "prev_league_id");
        p.last_rating = t.number(r, "last_rating");
        p.career_rating = t.number(r, "career_rating");
        p.game_time = t.number(r, "game_time");
        p.goals = t.number(r, "goals");
        p.goal_contributions = t.number(r, "goal_contributions");
        p.penalty_accuracy = t.number(r, "penalty_accuracy");
        if (p.penalty_accuracy < 0.0 || p.penalty_accuracy > 1.0)
            throw BadValue(at + ": penalty_accuracy outside [0,1]");
        p.shots = t.number(r, "shots");
        p.passing_accuracy = t.number(r, "passing_accuracy");
        const double yellow = t.number(r, "yellow_cards");
        const double red = t.number(r, "red_cards");
        if (yellow < 0.0 || red < 0.0) throw BadValue(at + ": negative card count");
        p.cards = yellow + 2.0 * red;
        p.clearances = t.number(r, "clearances");
        p.interceptions = t.number(r, "interceptions");
        p.n_transfers = t.number(r, "n_transfers");
        p.transfer_listed = t.flag(r, "transfer_listed");
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<PlayerRecord> load_player_table(const std::filesystem::path& file) {
    auto in = open_or_throw(file);
    return load_player_table(in);
}

// Cards are already aggregated, so they are written back as yellows with zero reds.
std::string write_player_table(const std::vector<PlayerRecord>& players) {
    std::ostringstream os;
    const auto& cols = player_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& p : players) {
        const std::vector<std::string> f{
            csv_escape(p.player_id), csv_escape(p.name), std::string(to_string(p.position)),
            fmt_double(p.age), fmt_double(p.height), fmt_double(p.weight),
            csv_escape(p.nationality), csv_escape(p.club_id), csv_escape(p.prev_club_id),
            csv_escape(p.league_id), csv_escape(p.prev_league_id), fmt_double(p.last_rating),
            fmt_double(p.career_rating), fmt_double(p.game_time), fmt_double(p.goals),
            fmt_double(p.goal_contributions), fmt_double(p.penalty_accuracy), fmt_double(p.shots),
            fmt_double(p.passing_accuracy), fmt_double(p.cards), "0", fmt_double(p.clearances),
            fmt_double(p.interceptions), fmt_double(p.n_transfers),
            p.transfer_listed ? "true" : "false"};
        for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
        os << '\n';
    }
    return os.str();
}

std::vector<ClubRow> load_club_table(std::istream& in) {
    const CsvTable t(in, club_columns());
    std::vector<ClubRow> out;
    for (std::size_t r = 0; r < t.size(); ++r) {
        ClubRow c;
        c.club_id = t.text(r, "club_id");
        c.league_id = t.text(r, "league_id");
        c.country = t.text(r, "country");
        c.continent = t.text(r, "continent");
        c.top_league = t.flag(r, "top_league");
        c.league_median_sell_fee = t.number(r, "league_median_sell_fee");
        c.league_median_buy_fee = t.number(r, "league_median_buy_fee");
        c.budget_max = t.number(r, "budget_max");
        c.profit_min = t.number(r, "profit_min");
        if (!(c.budget_max > 0.0))
            throw BadValue("club " + c.club_id + ": budget_max must be positive");
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<ClubRow> load_club_table(const std::filesystem::path& file) {
    auto in = open_or_throw(file);
    return load_club_table(in);
}

const ClubContext& Dataset::club(const std::string& id) const {
    const auto it = clubs.find(id);
    if (it == clubs.end()) throw UnknownClub(id);
    return it->second;
}

Dataset build_dataset(std::vector<PlayerRecord> players, const std::vector<ClubRow>& rows) {
    Dataset d;
    for (const auto& r : rows) {
        ClubContext c;
        c.club_id = r.club_id;
        c.league_id = r.league_id;
        c.country = r.country;
        c.continent = r.continent;
        c.top_league = r.top_league;
        c.league_median_sell_fee = r.league_median_sell_fee;
        c.league_median_buy_fee = r.league_median_buy_fee;
        c.budget_max = r.budget_max;
        c.profit_min = r.profit_min;
        if (!d.clubs.emplace(r.club_id, std::move(c)).second)
            throw BadValue("duplicate club_id " + r.club_id);
    }
    for (const auto& p : players) {
        auto it = d.clubs.find(p.club_id);
        if (it == d.clubs.end()) throw UnknownClub(p.club_id + " (player " + p.player_id + ")");
        it->second.member_ids.push_back(p.player_id);
    }
    std::map<std::string, const PlayerRecord*> by_id;
    for (const auto& p : players) by_id[p.player_id] = &p;
    for (auto& [id, c] : d.clubs) {
        if (c.member_ids.empty()) throw BadValue("club " + id + " has no players");
        std::vector<double> all;
        std::array<std::vector<double>, 4> by_pos;
        double age = 0.0;
        for (const auto& pid : c.member_ids) {
            const PlayerRecord& p = *by_id.at(pid);
            all.push_back(p.last_rating);
            by_pos[static_cast<int>(p.position)].push_back(p.last_rating);
            age += p.age;
        }
        c.median_rating = median(all);
        for (int k = 0; k < 4; ++k) {
            c.depth_by_position[k] = static_cast<double>(by_pos[k].size());
            // No squad members in a role: fall back to the squad median.
            c.median_rating_by_position[k] = by_pos[k].empty() ? c.median_rating : median(by_pos[k]);
        }
        const double n = static_cast<double>(c.member_ids.size());
        c.avg_age = age / n;
        double sum = 0.0;
        for (double v : all) sum += v;
        c.avg_rating = sum / n;
    }
    d.players = std::move(players);
    return d;
}

ModelCoefficients load_coefficients(const json& j) {
    ModelCoefficients c;
    const json& rm = require(j, "rating_model", "coefficients");
    const json& fm = require(j, "fee_model", "coefficients");

    std::string units;
    if (j.contains("fee_units")) units = j.at("fee_units").get<std::string>();
    else if (fm.contains("fee_units")) units = fm.at("fee_units").get<std::string>();
    else throw BadUnits("fee_units not declared");
    if (units != kFeeUnits) throw BadUnits("fee_units '" + units + "', expected " + kFeeUnits);
    c.fee_units = units;

    c.rating.block = load_block(rm, rating_feature_names(), "rating_model");
    const json rr = rm.value("random", json::object());
    c.rating.corridor = number_map(rr.value("corridor", json()), "rating_model.random.corridor");
    c.rating.current_league =
        number_map(rr.value("current_league", json()), "rating_model.random.current_league");
    c.rating.last_league =
        number_map(rr.value("last_league", json()), "rating_model.random.last_league");
    const json& rv = require(rm, "variances", "rating_model");
    c.rating.sigma2 = variance_component(rv, "sigma2", "rating_model.variances");
    c.rating.sigma2_club = variance_component(rv, "club", "rating_model.variances");
    c.rating.sigma2_cur = variance_component(rv, "cur", "rating_model.variances");
    c.rating.sigma2_last = variance_component(rv, "last", "rating_model.variances");

    c.fee.block = load_block(fm, fee_feature_names(), "fee_model");
    const json fr = fm.value("random", json::object());
    c.fee.buyer = number_map(fr.value("buyer", json()), "fee_model.random.buyer");
    c.fee.seller = number_map(fr.value("seller", json()), "fee_model.random.seller");
    const json& fv = require(fm, "variances", "fee_model");
    c.fee.tau2 = variance_component(fv, "tau2", "fee_model.variances");
    c.fee.sigma2_buy = variance_component(fv, "buy", "fee_model.variances");
    c.fee.sigma2_sell = variance_component(fv, "sell", "fee_model.variances");
    return c;
}

ModelCoefficients load_coefficients(const std::filesystem::path& file) {
    return load_coefficients(read_json_file(file));
}

json to_json(const ModelCoefficients& c) {
    json rm = block_to_json(c.rating.block);
    rm["random"] = {{"corridor", c.rating.corridor},
                    {"current_league", c.rating.current_league},
                    {"last_league", c.rating.last_league}};
    rm["variances"] = {{"sigma2", c.rating.sigma2}, {"club", c.rating.sigma2_club},
                       {"cur", c.rating.sigma2_cur}, {"last", c.rating.sigma2_last}};
    json fm = block_to_json(c.fee.block);
    fm["random"] = {{"buyer", c.fee.buyer}, {"seller", c.fee.seller}};
    fm["variances"] = {{"tau2", c.fee.tau2}, {"buy", c.fee.sigma2_buy}, {"sell", c.fee.sigma2_sell}};
    return {{"fee_units", c.fee_units}, {"rating_model", rm}, {"fee_model", fm}};
}

ScenarioConfig load_scenario_config(const json& j) {
    if (!j.is_object()) throw BadValue("scenario must be a JSON object");
    ScenarioConfig s;
    s.focal_club = j.value("focal_club", std::string{});
    if (s.focal_club.empty()) throw BadValue("scenario.focal_club is required");

    if (j.contains("lambda")) {
        const json& l = j.at("lambda");
        if (l.is_array()) {
            if (l.size() != 3) throw BadWeight("lambda needs three components");
            s.lambda = {l[0].get<double>(), l[1].get<double>(), l[2].get<double>()};
        } else if (l.is_object()) {
            s.lambda = {l.value("cost", 0.0), l.value("risk", 0.0), l.value("quality", 0.0)};
        } else {
            throw BadWeight("lambda must be an array or object");
        }
    }
    for (double w : {s.lambda.cost, s.lambda.risk, s.lambda.quality})
        if (!(w >= 0.0) || !std::isfinite(w)) throw BadWeight("lambda components must be finite and >= 0");

    s.alpha = get_double(j, "alpha", 0.05);
    if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw BadValue("alpha must lie in (0,1)");

    ConstraintBounds& b = s.bounds;
    if (j.contains("bounds")) {
        const json& jb = j.at("bounds");
        b.k_tot_max = get_int(jb, "k_tot_max", b.k_tot_max);
        b.k_retain_min = get_int(jb, "k_retain_min", b.k_retain_min);
        b.k_transfer_max = get_int(jb, "k_transfer_max", b.k_transfer_max);
        b.gk_min = get_int(jb, "gk_min", b.gk_min);
        b.gk_max = get_int(jb, "gk_max", b.gk_max);
        b.df_min = get_int(jb, "df_min", b.df_min);
        b.mf_min = get_int(jb, "mf_min", b.mf_min);
        b.fw_min = get_int(jb, "fw_min", b.fw_min);
        if (jb.contains("buy_min")) {
            for (const auto& [k, v] : jb.at("buy_min").items())
                b.buy_min[static_cast<int>(parse_position(k))] = v.get<int>();
        }
        b.other_continent_min = get_int(jb, "other_continent_min", b.other_continent_min);
        b.other_continent_max = get_int(jb, "other_continent_max", b.other_continent_max);
        b.top_league_min = get_int(jb, "top_league_min", b.top_league_min);
        b.local_min = get_int(jb, "local_min", b.local_min);
        if (jb.contains("profit_min")) {
            b.profit_min = jb.at("profit_min").get<double>();
            s.profit_given = true;
        }
        if (jb.contains("budget_max")) {
            b.budget_max = jb.at("budget_max").get<double>();
            s.budget_given = true;
        }
    }
    b.alpha = s.alpha;
    b.validate();

    if (j.contains("directives")) {
        const json& d = j.at("directives");
        s.directives.must_buy = id_list(d, "must_buy");
        s.directives.must_sell = id_list(d, "must_sell");
        s.directives.keep = id_list(d, "keep");
    }
    std::set<std::string> seen;
    for (const auto* set : {&s.directives.must_buy, &s.directives.must_sell, &s.directives.keep}) {
        std::set<std::string> local;
        for (const auto& id : *set) {
            if (!local.insert(id).second) continue;
            if (!seen.insert(id).second) throw ConflictingDirectives(id);
        }
    }

    if (j.contains("solver")) {
        const json& js = j.at("solver");
        SolverParams& p = s.solver;
        if (js.contains("method")) p.method = parse_method(js.at("method").get<std::string>());
        p.population = get_int(js, "population", p.population);
        p.iterations = get_int(js, "iterations", p.iterations);
        p.stall = get_int(js, "stall", p.stall);
        p.mutation_rate = get_double(js, "mutation_rate", p.mutation_rate);
        p.crossover_rate = get_double(js, "crossover_rate", p.crossover_rate);
        p.elite = get_int(js, "elite", p.elite);
        p.initial_temperature = get_double(js, "initial_temperature", p.initial_temperature);
        p.final_temperature = get_double(js, "final_temperature", p.final_temperature);
        p.restarts = get_int(js, "restarts", p.restarts);
        p.beta = get_double(js, "beta", p.beta);
        if (js.contains("seed")) p.seed = js.at("seed").get<std::uint64_t>();
    }
    s.solver.validate();

    s.resale_prices = number_map(j.value("resale_prices", json()), "resale_prices");
    s.normalize = j.value("normalize", false);
    s.time_index = get_double(j, "time_index", 0.0);
    return s;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& file) {
    return load_scenario_config(read_json_file(file));
}

json to_json(const ScenarioConfig& s) {
    const ConstraintBounds& b = s.bounds;
    json bounds = {{"k_tot_max", b.k_tot_max},
                   {"k_retain_min", b.k_retain_min},
                   {"k_transfer_max", b.k_transfer_max},
                   {"gk_min", b.gk_min},
                   {"gk_max", b.gk_max},
                   {"df_min", b.df_min},
                   {"mf_min", b.mf_min},
                   {"fw_min", b.fw_min},
                   {"buy_min", {{"GK", b.buy_min[0]}, {"DF", b.buy_min[1]}, {"MF", b.buy_min[2]}, {"FW", b.buy_min[3]}}},
                   {"other_continent_min", b.other_continent_min},
                   {"other_continent_max", b.other_continent_max},
                   {"top_league_min", b.top_league_min},
                   {"local_min", b.local_min}};
    if (s.profit_given) bounds["profit_min"] = b.profit_min;
    if (s.budget_given) bounds["budget_max"] = b.budget_max;
    const SolverParams& p = s.solver;
    return {{"focal_club", s.focal_club},
            {"lambda", {s.lambda.cost, s.lambda.risk, s.lambda.quality}},
            {"alpha", s.alpha},
            {"bounds", bounds},
            {"directives",
             {{"must_buy", s.directives.must_buy},
              {"must_sell", s.directives.must_sell},
              {"keep", s.directives.keep}}},
            {"solver",
             {{"method", std::string(to_string(p.method))},
              {"population", p.population},
              {"iterations", p.iterations},
              {"stall", p.stall},
              {"mutation_rate", p.mutation_rate},
              {"crossover_rate", p.crossover_rate},
              {"elite", p.elite},
              {"initial_temperature", p.initial_temperature},
              {"final_temperature", p.final_temperature},
              {"restarts", p.restarts},
              {"beta", p.beta},
              {"seed", p.seed}}},
            {"resale_prices", s.resale_prices},
            {"normalize", s.normalize},
            {"time_index", s.time_index}};
}

json read_json_file(const std::filesystem::path& file) {
    auto in = open_or_throw(file);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw BadValue(file.string() + ": " + e.what());
    }
}

} // namespace tfe
