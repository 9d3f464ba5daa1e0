#pragma once
// Append-only run trace: one JSONL line per agent step, plus an in-memory
// mirror for inspection. Appends are idempotent on replayed indices and
// reject gaps, so a crashed-and-resumed run cannot corrupt the log.

#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "errors.hpp"

namespace hypoforge {

inline nlohmann::json step_to_json(const StepRecord& s) {
    return nlohmann::json{
        {"run_id", s.run_id},
        {"step_index", s.step_index},
        {"agent_role", to_string(s.agent_role)},
        {"input_digest", s.input_digest},
        {"output_text", s.output_text},
        {"tokens_in", s.tokens_in},
        {"tokens_out", s.tokens_out},
        {"timestamp", s.timestamp},
    };
}

inline StepRecord step_from_json(const nlohmann::json& j) {
    StepRecord s;
    s.run_id = j.at("run_id").get<std::string>();
    s.step_index = j.at("step_index").get<int>();
    s.agent_role = agent_role_from_string(j.at("agent_role").get<std::string>());
    s.input_digest = j.at("input_digest").get<std::string>();
    s.output_text = j.at("output_text").get<std::string>();
    s.tokens_in = j.at("tokens_in").get<long>();
    s.tokens_out = j.at("tokens_out").get<long>();
    s.timestamp = j.at("timestamp").get<std::string>();
    return s;
}

class TraceSink {
  public:
    // In-memory only.
    TraceSink() = default;

    // Mirror every append to a JSONL file (truncates any existing file).
    explicit TraceSink(const std::string& path) : path_(path) {
        file_.open(path, std::ios::trunc);
        if (!file_) throw InputError("cannot open trace file: " + path);
    }

    void open_run(const std::string& run_id) {
        std::lock_guard lock(mu_);
        auto [it, inserted] = runs_.try_emplace(run_id);
        if (!inserted && it->second.closed)
            throw StateError("run already closed: " + run_id);
    }

    // Returns true when the record was written, false when step_index was a
    // replay of an index already present (the record is dropped unchanged).
    bool append(const StepRecord& rec) {
        std::lock_guard lock(mu_);
        auto it = runs_.find(rec.run_id);
        if (it == runs_.end()) throw StateError("append to unknown run: " + rec.run_id);
        RunLog& log = it->second;
        if (log.closed) throw StateError("append to closed run: " + rec.run_id);
        int next = static_cast<int>(log.steps.size());
        if (rec.step_index < next) return false;  // idempotent replay
        if (rec.step_index > next)
            throw SequencingError("step_index " + std::to_string(rec.step_index) +
                                  " skips ahead of " + std::to_string(next) + " in run " +
                                  rec.run_id);
        log.steps.push_back(rec);
        if (file_.is_open()) {
            file_ << step_to_json(rec).dump() << '\n';
            file_.flush();
        }
        return true;
    }

    void close_run(const std::string& run_id) {
        std::lock_guard lock(mu_);
        auto it = runs_.find(run_id);
        if (it == runs_.end()) throw StateError("close of unknown run: " + run_id);
        it->second.closed = true;
    }

    std::vector<StepRecord> steps(const std::string& run_id) const {
        std::lock_guard lock(mu_);
        auto it = runs_.find(run_id);
        if (it == runs_.end()) throw StateError("steps of unknown run: " + run_id);
        return it->second.steps;
    }

    const std::string& path() const { return path_; }

  private:
    struct RunLog {
        std::vector<StepRecord> steps;
        bool closed = false;
    };

    mutable std::mutex mu_;
    std::map<std::string, RunLog> runs_;
    std::string path_;
    std::ofstream file_;
};

// Reads a JSONL trace back into records, preserving file order.
inline std::vector<StepRecord> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open trace file: " + path);
    std::vector<StepRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ParseError("trace line " + std::to_string(lineno) + " is not valid JSON");
        out.push_back(step_from_json(j));
    }
    return out;
}

}  // namespace hypoforge
