#pragma once
#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace tfe::service {

enum class RunStatus { Queued, Running, Done, Failed };
std::string_view to_string(RunStatus s);
RunStatus parse_status(std::string_view s);

struct ScenarioRun {
    std::string run_id;
    std::string kind; // "plan" | "auction"
    RunStatus status = RunStatus::Queued;
    nlohmann::json config; // snapshot, immutable after creation
    nlohmann::json result;
    nlohmann::json error;
    nlohmann::json progress;
    std::string created_at;
    std::string completed_at;
};

nlohmann::json to_json(const ScenarioRun& run);

// One append-only JSONL log per run under `dir`; the last line is the
// current state. Runs that were queued or running when a previous process
// stopped are closed as failed on load and never re-executed.
class RunStore {
public:
    explicit RunStore(std::filesystem::path dir);

    ScenarioRun create(const std::string& kind, nlohmann::json config);
    void mark_running(const std::string& id);
    void set_progress(const std::string& id, nlohmann::json progress); // in memory only
    void complete(const std::string& id, nlohmann::json result);
    void fail(const std::string& id, nlohmann::json error);

    std::optional<ScenarioRun> get(const std::string& id) const;
    std::size_t size() const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    void append(const ScenarioRun& run);
    ScenarioRun& at(const std::string& id);

    std::filesystem::path dir_;
    mutable std::mutex mu_;
    std::map<std::string, ScenarioRun> runs_;
};

std::string utc_now();
std::string new_run_id();

} // namespace tfe::service
