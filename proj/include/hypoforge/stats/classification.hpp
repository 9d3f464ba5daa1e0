#pragma once
// Binary relation-classification scoring: per-class precision/recall/F1
// with supports, plus accuracy and macro averages. Zero denominators score
// 0.0 rather than NaN so reports stay printable.

#include <map>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../gateway.hpp"
#include "../parsers.hpp"
#include "../prompts.hpp"

namespace hypoforge {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    long support = 0;  // true instances of the class
};

struct MetricsReport {
    std::map<std::string, ClassMetrics> per_class;  // keyed by label name
    ClassMetrics macro;                             // unweighted mean; support = total
    double accuracy = 0.0;
};

inline MetricsReport classification_metrics(const std::vector<Relation>& predicted,
                                            const std::vector<Relation>& truth) {
    if (predicted.empty()) throw InputError("no predictions");
    if (predicted.size() != truth.size())
        throw InputError("predicted and true label lists differ in length");

    const Relation classes[] = {Relation::Positive, Relation::Negative};
    MetricsReport report;
    long correct = 0;
    for (size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == truth[i];
    report.accuracy = static_cast<double>(correct) / predicted.size();

    auto safe_div = [](double num, double den) { return den > 0 ? num / den : 0.0; };
    for (Relation c : classes) {
        long tp = 0, fp = 0, fn = 0;
        for (size_t i = 0; i < predicted.size(); ++i) {
            if (predicted[i] == c && truth[i] == c) ++tp;
            if (predicted[i] == c && truth[i] != c) ++fp;
            if (predicted[i] != c && truth[i] == c) ++fn;
        }
        ClassMetrics m;
        m.precision = safe_div(tp, tp + fp);
        m.recall = safe_div(tp, tp + fn);
        m.f1 = safe_div(2 * m.precision * m.recall, m.precision + m.recall);
        m.support = tp + fn;
        report.per_class[to_string(c)] = m;

        report.macro.precision += m.precision / std::size(classes);
        report.macro.recall += m.recall / std::size(classes);
        report.macro.f1 += m.f1 / std::size(classes);
        report.macro.support += m.support;
    }
    return report;
}

// Runs one statement through the relation-classifier prompt. Used to map a
// free-text hypothesis onto the positive/negative label space so it can be
// scored against a gold relation.
struct ClassifiedStatement {
    Relation relation;
    AgentExchange exchange;
};

inline ClassifiedStatement classify_relation(const std::string& statement, ChatBackend& backend,
                                             double temperature = 0.3) {
    PromptContext ctx;
    ctx.role = AgentRole::Classifier;
    ctx.hypothesis = statement;
    RenderedPrompt prompt = render_prompt(ctx);
    ChatRequest req;
    req.system_prompt = prompt.system_prompt;
    req.user_prompt = prompt.user_prompt;
    req.temperature = temperature;
    ChatResponse resp = complete(backend, req);
    return {parse_relation(resp.text), {prompt, resp}};
}

}  // namespace hypoforge
