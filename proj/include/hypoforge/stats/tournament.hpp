#pragma once
// Pairwise tournament harness: every unordered pair of systems is judged on
// every shared topic, with presentation order decided by a seeded coin flip
// (left/right bias then shows up as the order-effect intercept downstream
// instead of contaminating the abilities). One judge call covers all four
// metrics, producing four comparison records.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../gateway.hpp"
#include "../parsers.hpp"
#include "../prompts.hpp"
#include "bradley_terry.hpp"

namespace hypoforge {

struct TournamentResult {
    std::vector<ComparisonRecord> records;
    std::vector<AgentExchange> exchanges;  // one per judged pairing, in order
    std::vector<std::string> skipped;      // pairings dropped on judge errors
};

// hypotheses_by_system: system id -> (topic -> hypothesis text). Every
// system must cover the same topic set.
inline TournamentResult run_pairwise_tournament(
    const std::map<std::string, std::map<std::string, std::string>>& hypotheses_by_system,
    ChatBackend& judge, unsigned seed, double temperature = 0.3) {
    if (hypotheses_by_system.size() < 2) throw InputError("need at least two systems");

    std::vector<std::string> systems;
    for (const auto& [id, _] : hypotheses_by_system) systems.push_back(id);
    std::vector<std::string> topics;
    for (const auto& [topic, _] : hypotheses_by_system.begin()->second) topics.push_back(topic);
    if (topics.empty()) throw InputError("no topics");
    for (const auto& [id, by_topic] : hypotheses_by_system)
        for (const auto& topic : topics)
            if (!by_topic.count(topic))
                throw InputError("system " + id + " has no hypothesis for topic: " + topic);

    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    TournamentResult out;

    for (const auto& topic : topics) {
        for (size_t i = 0; i < systems.size(); ++i) {
            for (size_t j = i + 1; j < systems.size(); ++j) {
                std::string first = systems[i], second = systems[j];
                if (coin(rng)) std::swap(first, second);

                PromptContext ctx;
                ctx.role = AgentRole::Judge;
                ctx.background = topic;
                ctx.pair = {{hypotheses_by_system.at(first).at(topic),
                             hypotheses_by_system.at(second).at(topic)}};
                RenderedPrompt prompt = render_prompt(ctx);
                ChatRequest req;
                req.system_prompt = prompt.system_prompt;
                req.user_prompt = prompt.user_prompt;
                req.temperature = temperature;
                try {
                    ChatResponse resp = complete(judge, req);
                    PairwiseVerdict verdict = parse_pairwise(resp.text);
                    for (int m = 0; m < kMetricCount; ++m) {
                        Outcome o = verdict.winners[m] == PairwiseWinner::First ? Outcome::FirstWins
                                    : verdict.winners[m] == PairwiseWinner::Second
                                        ? Outcome::SecondWins
                                        : Outcome::Tie;
                        out.records.push_back({first, second, kAllMetrics[m], o});
                    }
                    out.exchanges.push_back({prompt, resp});
                } catch (const Error& e) {
                    out.skipped.push_back(topic + " / " + first + " vs " + second + ": " + e.what());
                }
            }
        }
    }
    return out;
}

}  // namespace hypoforge
