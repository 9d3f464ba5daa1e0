#pragma once
// Shared domain types: metric scores, hypotheses, evidence, trace records
// and pipeline configuration.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "date.hpp"
#include "errors.hpp"

namespace hypoforge {

inline constexpr int kMetricCount = 4;
inline constexpr const char* kMetricNames[kMetricCount] = {"Novelty", "Relevance",
                                                           "Significance", "Verifiability"};

// Four 0-5 ratings; the overall score is always their sum.
struct MetricScores {
    int novelty = 0;
    int relevance = 0;
    int significance = 0;
    int verifiability = 0;

    bool operator==(const MetricScores&) const = default;

    int get(int metric_index) const {
        switch (metric_index) {
            case 0: return novelty;
            case 1: return relevance;
            case 2: return significance;
            default: return verifiability;
        }
    }

    void set(int metric_index, int value) {
        switch (metric_index) {
            case 0: novelty = value; break;
            case 1: relevance = value; break;
            case 2: significance = value; break;
            default: verifiability = value; break;
        }
    }

    void validate() const {
        for (int m = 0; m < kMetricCount; ++m) {
            int v = get(m);
            if (v < 0 || v > 5)
                throw RangeError(std::string(kMetricNames[m]) + " score " + std::to_string(v) +
                                 " outside [0,5]");
        }
    }
};

inline int overall_score(const MetricScores& s) {
    return s.novelty + s.relevance + s.significance + s.verifiability;
}

struct Hypothesis {
    std::string id;
    std::string text;
    int generation = 0;  // 0 = initial, +1 per refinement
    std::optional<std::string> parent_id;
    std::optional<MetricScores> scores;
    std::map<std::string, std::string> rationale;  // metric name -> critic comment

    bool operator==(const Hypothesis&) const = default;

    void validate() const {
        if (text.empty()) throw InputError("hypothesis text empty");
        if (generation < 0) throw InputError("hypothesis generation negative");
        if ((generation == 0) == parent_id.has_value())
            throw InputError("parent_id must be absent iff generation = 0");
        if (scores) scores->validate();
    }
};

struct LiteratureRecord {
    std::string pmid;
    std::string title;
    std::string abstract_text;
    Date pub_date;

    bool operator==(const LiteratureRecord&) const = default;
};

struct EvidenceBundle {
    std::vector<LiteratureRecord> literature;
    std::optional<std::string> subgraph_text;
    std::optional<std::string> background;

    bool operator==(const EvidenceBundle&) const = default;

    bool populated() const {
        return !literature.empty() || subgraph_text.has_value() || background.has_value();
    }
};

enum class AgentRole {
    Planner,
    Background,
    Explorer,
    Scientist,
    Critic,
    Reviewer,
    Refiner,
    Classifier,
    Judge,
};

inline const char* to_string(AgentRole r) {
    switch (r) {
        case AgentRole::Planner: return "Planner";
        case AgentRole::Background: return "Background";
        case AgentRole::Explorer: return "Explorer";
        case AgentRole::Scientist: return "Scientist";
        case AgentRole::Critic: return "Critic";
        case AgentRole::Reviewer: return "Reviewer";
        case AgentRole::Refiner: return "Refiner";
        case AgentRole::Classifier: return "Classifier";
        case AgentRole::Judge: return "Judge";
    }
    return "?";
}

inline AgentRole agent_role_from_string(const std::string& s) {
    static const std::map<std::string, AgentRole> table = {
        {"Planner", AgentRole::Planner},     {"Background", AgentRole::Background},
        {"Explorer", AgentRole::Explorer},   {"Scientist", AgentRole::Scientist},
        {"Critic", AgentRole::Critic},       {"Reviewer", AgentRole::Reviewer},
        {"Refiner", AgentRole::Refiner},     {"Classifier", AgentRole::Classifier},
        {"Judge", AgentRole::Judge},
    };
    auto it = table.find(s);
    if (it == table.end()) throw InputError("unknown agent role: '" + s + "'");
    return it->second;
}

// One agent call in a run's append-only trace.
struct StepRecord {
    std::string run_id;
    int step_index = 0;
    AgentRole agent_role = AgentRole::Planner;
    std::string input_digest;
    std::string output_text;
    long tokens_in = 0;
    long tokens_out = 0;
    std::string timestamp;  // RFC 3339 UTC

    bool operator==(const StepRecord&) const = default;
};

struct PipelineConfig {
    int max_cycles = 3;
    int n_initial_hypotheses = 3;
    int accept_threshold = 18;  // out of 20
    int emit_floor = 15;        // out of 20
    std::optional<Date> temporal_cutoff;
    double temperature = 0.3;
    int seed = 42;
    std::optional<long> token_limit;
    int relaxation_min_hits = 3;  // fewer search hits than this triggers relaxation
    bool emit_plan = true;

    void validate() const {
        if (max_cycles < 1) throw InputError("max_cycles must be >= 1");
        if (n_initial_hypotheses < 1) throw InputError("n_initial_hypotheses must be >= 1");
        if (!(0 < emit_floor && emit_floor <= accept_threshold && accept_threshold <= 20))
            throw InputError("require 0 < emit_floor <= accept_threshold <= 20");
        if (temperature < 0.0 || temperature > 2.0)
            throw InputError("temperature outside [0,2]");
    }
};

}  // namespace hypoforge
