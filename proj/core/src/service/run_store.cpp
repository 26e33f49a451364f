#include "tfe/service/run_store.hpp"

#include "tfe/errors.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>

namespace tfe::service {

using nlohmann::json;

std::string_view to_string(RunStatus s) {
    switch (s) {
    case RunStatus::Queued: return "queued";
    case RunStatus::Running: return "running";
    case RunStatus::Done: return "done";
    case RunStatus::Failed: return "failed";
    }
    return "?";
}

RunStatus parse_status(std::string_view s) {
    if (s == "queued") return RunStatus::Queued;
    if (s == "running") return RunStatus::Running;
    if (s == "done") return RunStatus::Done;
    if (s == "failed") return RunStatus::Failed;
    throw BadEnum("run status '" + std::string(s) + "'");
}

json to_json(const ScenarioRun& r) {
    json j = {{"run_id", r.run_id},
              {"kind", r.kind},
              {"status", std::string(to_string(r.status))},
              {"config", r.config},
              {"created_at", r.created_at}};
    if (r.status == RunStatus::Done) j["result"] = r.result;
    if (r.status == RunStatus::Failed) j["error"] = r.error;
    if (!r.progress.is_null()) j["progress"] = r.progress;
    if (!r.completed_at.empty()) j["completed_at"] = r.completed_at;
    return j;
}

namespace {

ScenarioRun from_json(const json& j) {
    ScenarioRun r;
    r.run_id = j.at("run_id").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.status = parse_status(j.at("status").get<std::string>());
    r.config = j.value("config", json());
    r.result = j.value("result", json());
    r.error = j.value("error", json());
    r.created_at = j.value("created_at", std::string{});
    r.completed_at = j.value("completed_at", std::string{});
    return r;
}

} // namespace

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string new_run_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

RunStore::RunStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        if (entry.path().extension() != ".jsonl") continue;
        std::ifstream in(entry.path());
        std::string line, last;
        while (std::getline(in, line))
            if (!line.empty()) last = line;
        if (last.empty()) continue;
        json j;
        try {
            j = json::parse(last);
        } catch (const json::exception&) {
            continue; // torn final write: the previous line is not recoverable as state either
        }
        ScenarioRun run = from_json(j);
        runs_[run.run_id] = run;
        if (run.status == RunStatus::Queued || run.status == RunStatus::Running) {
            ScenarioRun& r = runs_[run.run_id];
            r.status = RunStatus::Failed;
            r.error = {{"kind", "Interrupted"}, {"message", "service stopped before the run finished"}};
            r.completed_at = utc_now();
            append(r);
        }
    }
}

void RunStore::append(const ScenarioRun& run) {
    json j = to_json(run);
    j.erase("progress");
    std::ofstream out(dir_ / (run.run_id + ".jsonl"), std::ios::app);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw BadValue("cannot persist run " + run.run_id);
}

ScenarioRun& RunStore::at(const std::string& id) {
    const auto it = runs_.find(id);
    if (it == runs_.end()) throw BadValue("unknown run " + id);
    return it->second;
}

ScenarioRun RunStore::create(const std::string& kind, json config) {
    std::lock_guard lock(mu_);
    ScenarioRun r;
    do {
        r.run_id = new_run_id();
    } while (runs_.count(r.run_id));
    r.kind = kind;
    r.config = std::move(config);
    r.created_at = utc_now();
    append(r);
    runs_[r.run_id] = r;
    return r;
}

void RunStore::mark_running(const std::string& id) {
    std::lock_guard lock(mu_);
    ScenarioRun& r = at(id);
    r.status = RunStatus::Running;
    append(r);
}

void RunStore::set_progress(const std::string& id, json progress) {
    std::lock_guard lock(mu_);
    at(id).progress = std::move(progress);
}

void RunStore::complete(const std::string& id, json result) {
    std::lock_guard lock(mu_);
    ScenarioRun& r = at(id);
    r.status = RunStatus::Done;
    r.result = std::move(result);
    r.completed_at = utc_now();
    append(r);
}

void RunStore::fail(const std::string& id, json error) {
    std::lock_guard lock(mu_);
    ScenarioRun& r = at(id);
    r.status = RunStatus::Failed;
    r.error = std::move(error);
    r.completed_at = utc_now();
    append(r);
}

std::optional<ScenarioRun> RunStore::get(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = runs_.find(id);
    if (it == runs_.end()) return std::nullopt;
    return it->second;
}

std::size_t RunStore::size() const {
    std::lock_guard lock(mu_);
    return runs_.size();
}

} // namespace tfe::service
