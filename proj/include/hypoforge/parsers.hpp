#pragma once
// Parsers for the strictly formatted agent replies, plus the wire format for
// refinement directives. Metric lines are matched by name rather than
// position, since models reorder and re-punctuate them; everything else is
// rejected loudly rather than guessed at.

#include <array>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "text.hpp"

namespace hypoforge {

// ---------------------------------------------------------------------------
// Refinement directives (Reviewer output).
// ---------------------------------------------------------------------------

enum class RefineAction { KG, LITERATURE, BACKGROUND };

// Wire tokens are fixed lowercase strings; the enum is the in-process form.
inline const char* action_token(RefineAction a) {
    switch (a) {
        case RefineAction::KG: return "neo4j";
        case RefineAction::LITERATURE: return "pubmed";
        case RefineAction::BACKGROUND: return "background";
    }
    return "?";
}

struct RefinementDirective {
    std::set<RefineAction> actions;  // never empty for a valid directive
    std::optional<int> depth_override;
    std::optional<std::vector<std::string>> rels_override;

    bool operator==(const RefinementDirective&) const = default;
};

// Renders a directive in the exact three-line reply format, so that
// parse_reviewer(format_directive(d)) == d for every valid d.
inline std::string format_directive(const RefinementDirective& d) {
    if (d.actions.empty()) throw ProtocolError("directive has zero actions");
    std::vector<std::string> toks;
    for (RefineAction a : d.actions) toks.push_back(action_token(a));
    std::string out = "ACTIONS:" + join(toks, ",");
    out += "\nDEPTH_OVERRIDE:";
    if (d.depth_override) out += std::to_string(*d.depth_override);
    out += "\nRELS_OVERRIDE:";
    if (d.rels_override) out += join(*d.rels_override, ",");
    return out;
}

inline RefinementDirective parse_reviewer(const std::string& text) {
    std::optional<std::string> actions_line, depth_line, rels_line;
    for (const std::string& raw : nonblank_lines(text)) {
        std::string line = trim(raw);
        if (line.starts_with("ACTIONS:"))
            actions_line = line.substr(8);
        else if (line.starts_with("DEPTH_OVERRIDE:"))
            depth_line = line.substr(15);
        else if (line.starts_with("RELS_OVERRIDE:"))
            rels_line = line.substr(14);
    }
    if (!actions_line) throw ParseError("reviewer reply missing ACTIONS line");
    if (!depth_line) throw ParseError("reviewer reply missing DEPTH_OVERRIDE line");
    if (!rels_line) throw ParseError("reviewer reply missing RELS_OVERRIDE line");

    RefinementDirective d;
    for (const std::string& tok : split(*actions_line, ',')) {
        std::string t = trim(tok);
        if (t.empty()) continue;
        if (t == "neo4j")
            d.actions.insert(RefineAction::KG);
        else if (t == "pubmed")
            d.actions.insert(RefineAction::LITERATURE);
        else if (t == "background")
            d.actions.insert(RefineAction::BACKGROUND);
        else
            throw ParseError("unknown action token: '" + t + "'");
    }
    if (d.actions.empty()) throw ProtocolError("reviewer recommended zero actions");

    std::string depth = trim(*depth_line);
    if (!depth.empty()) {
        static const std::regex int_re(R"(^[+-]?\d+$)");
        if (!std::regex_match(depth, int_re))
            throw ParseError("DEPTH_OVERRIDE is not an integer: '" + depth + "'");
        int v = std::stoi(depth);
        if (v < 1) throw RangeError("DEPTH_OVERRIDE must be >= 1, got " + depth);
        d.depth_override = v;
    }

    std::vector<std::string> rels;
    for (const std::string& tok : split(*rels_line, ',')) {
        std::string t = trim(tok);
        if (!t.empty()) rels.push_back(t);
    }
    if (!rels.empty()) d.rels_override = rels;
    return d;
}

// ---------------------------------------------------------------------------
// Metric-line matching shared by critic and direct-evaluator parsers.
// ---------------------------------------------------------------------------

namespace detail {

// Finds "<name> [:=-] [Score] <int>" anywhere in the text, tolerating
// markdown asterisks. Returns the value and match position, or nullopt.
struct MetricMatch {
    int value = 0;
    size_t pos = 0;  // offset of the metric name in the text
};

inline std::optional<MetricMatch> find_metric(const std::string& text, const std::string& name) {
    std::regex re(name + R"#([\s\*]*[:=\-]?[\s\*]*(?:Score[\s:=]*)?([+-]?\d+))#",
                  std::regex::icase);
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    return MetricMatch{std::stoi(m[1].str()), static_cast<size_t>(m.position(0))};
}

inline std::array<int, kMetricCount> parse_metric_values(const std::string& text, int scale_max,
                                                         std::array<size_t, kMetricCount>* positions) {
    std::array<int, kMetricCount> values{};
    for (int i = 0; i < kMetricCount; ++i) {
        auto m = find_metric(text, kMetricNames[i]);
        if (!m) throw ParseError(std::string("no score found for metric ") + kMetricNames[i]);
        if (m->value < 0 || m->value > scale_max)
            throw RangeError(std::string(kMetricNames[i]) + " score " +
                             std::to_string(m->value) + " outside [0," +
                             std::to_string(scale_max) + "]");
        values[i] = m->value;
        if (positions) (*positions)[i] = m->pos;
    }
    return values;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Critic output.
// ---------------------------------------------------------------------------

struct CriticReview {
    MetricScores scores;
    std::map<std::string, std::string> rationales;  // metric name -> sentence
    int stated_overall = 0;

    bool operator==(const CriticReview&) const = default;
};

// Parses the four metric scores (order-insensitive, name-keyed), the
// per-metric rationale sentences, and the final "Overall Score: <v>/20"
// line, and checks the stated overall against the sum of the four scores.
inline CriticReview parse_critic(const std::string& text) {
    if (trim(text).empty()) throw ParseError("critic reply empty");

    std::array<size_t, kMetricCount> positions{};
    auto values = detail::parse_metric_values(text, 5, &positions);

    static const std::regex overall_re(R"#(Overall\s*Score[\s:=]*([+-]?\d+)\s*/\s*20)#",
                                       std::regex::icase);
    std::smatch om;
    if (!std::regex_search(text, om, overall_re))
        throw ParseError("critic reply missing Overall Score line");

    CriticReview review;
    for (int i = 0; i < kMetricCount; ++i) review.scores.set(i, values[i]);
    review.stated_overall = std::stoi(om[1].str());
    int sum = overall_score(review.scores);
    if (review.stated_overall != sum)
        throw ConsistencyError("stated overall " + std::to_string(review.stated_overall) +
                               " does not equal metric sum " + std::to_string(sum));

    // Rationale for a metric: the lines strictly between its scored line and
    // the next scored/overall line. Single-line replies simply yield none.
    size_t overall_pos = static_cast<size_t>(om.position(0));
    for (int i = 0; i < kMetricCount; ++i) {
        size_t line_end = text.find('\n', positions[i]);
        if (line_end == std::string::npos) continue;
        size_t stop = overall_pos > positions[i] ? overall_pos : text.size();
        for (int j = 0; j < kMetricCount; ++j)
            if (positions[j] > positions[i] && positions[j] < stop) stop = positions[j];
        if (stop <= line_end) continue;
        std::string between = trim(text.substr(line_end, stop - line_end));
        if (!between.empty()) review.rationales[kMetricNames[i]] = between;
    }
    return review;
}

// ---------------------------------------------------------------------------
// Direct evaluator output (0-3 or 0-5 scale).
// ---------------------------------------------------------------------------

inline MetricScores parse_direct(const std::string& text, int scale_max) {
    if (scale_max != 3 && scale_max != 5)
        throw InputError("scale_max must be 3 or 5, got " + std::to_string(scale_max));
    if (trim(text).empty()) throw ParseError("evaluator reply empty");
    auto values = detail::parse_metric_values(text, scale_max, nullptr);
    MetricScores s;
    for (int i = 0; i < kMetricCount; ++i) s.set(i, values[i]);
    return s;
}

// ---------------------------------------------------------------------------
// Scientist and Refiner outputs.
// ---------------------------------------------------------------------------

struct HypothesisLines {
    std::vector<std::string> values;  // 1-3 hypothesis strings
    std::vector<std::string> warnings;
};

inline HypothesisLines parse_hypotheses(const std::string& text) {
    HypothesisLines out;
    for (const std::string& line : nonblank_lines(text)) out.values.push_back(trim(line));
    if (out.values.empty()) throw ParseError("scientist reply contains no hypotheses");
    if (out.values.size() > 3) {
        out.warnings.push_back("scientist returned " + std::to_string(out.values.size()) +
                               " hypotheses; keeping the first 3");
        out.values.resize(3);
    }
    return out;
}

struct RefinerReply {
    std::vector<std::string> reasoning_steps;
    std::string refined_hypothesis;
    std::vector<std::string> warnings;
};

inline RefinerReply parse_refiner(const std::string& text) {
    auto lines = nonblank_lines(text);
    if (lines.size() < 2)
        throw ParseError("refiner reply must contain reasoning steps and a final hypothesis");
    RefinerReply out;
    for (size_t i = 0; i + 1 < lines.size(); ++i) out.reasoning_steps.push_back(trim(lines[i]));
    out.refined_hypothesis = trim(lines.back());
    if (out.reasoning_steps.size() > 4)
        out.warnings.push_back("refiner produced " + std::to_string(out.reasoning_steps.size()) +
                               " reasoning steps (expected 1-4)");
    return out;
}

// ---------------------------------------------------------------------------
// Pairwise evaluator output.
// ---------------------------------------------------------------------------

enum class PairwiseWinner { First, Second, Tie };

struct PairwiseVerdict {
    std::array<PairwiseWinner, kMetricCount> winners{};
    std::array<std::string, kMetricCount> reasons{};

    bool operator==(const PairwiseVerdict&) const = default;
};

namespace detail {

inline bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// After a metric name, the verdict token must be a standalone A, B or 0 on
// the same line ("AB" or tokens glued to identifiers like H_A do not count).
inline std::optional<std::pair<PairwiseWinner, size_t>> find_verdict(const std::string& text,
                                                                     size_t from, size_t line_end) {
    for (size_t i = from; i < line_end; ++i) {
        char c = text[i];
        if (c != 'A' && c != 'B' && c != '0') continue;
        bool left_ok = i == 0 || !word_char(text[i - 1]);
        bool right_ok = i + 1 >= text.size() || !word_char(text[i + 1]);
        if (!left_ok || !right_ok) continue;
        PairwiseWinner w = c == 'A'   ? PairwiseWinner::First
                           : c == 'B' ? PairwiseWinner::Second
                                      : PairwiseWinner::Tie;
        return std::make_pair(w, i);
    }
    return std::nullopt;
}

}  // namespace detail

inline PairwiseVerdict parse_pairwise(const std::string& text) {
    if (trim(text).empty()) throw ParseError("pairwise reply empty");
    std::string lowered = to_lower(text);
    PairwiseVerdict verdict;
    for (int i = 0; i < kMetricCount; ++i) {
        std::string name = to_lower(kMetricNames[i]);
        size_t pos = lowered.find(name);
        std::optional<std::pair<PairwiseWinner, size_t>> found;
        size_t line_end = std::string::npos;
        while (pos != std::string::npos) {
            line_end = text.find('\n', pos);
            if (line_end == std::string::npos) line_end = text.size();
            found = detail::find_verdict(text, pos + name.size(), line_end);
            if (found) break;
            pos = lowered.find(name, pos + name.size());
        }
        if (!found)
            throw ParseError(std::string("no A/B/0 verdict found for metric ") + kMetricNames[i]);
        verdict.winners[i] = found->first;
        std::string rest = trim(text.substr(found->second + 1, line_end - found->second - 1));
        while (!rest.empty() && (rest.front() == '"' || rest.front() == ':' || rest.front() == '-' ||
                                 rest.front() == ',' || rest.front() == '.'))
            rest.erase(rest.begin());
        verdict.reasons[i] = trim(rest);
    }
    return verdict;
}

// ---------------------------------------------------------------------------
// Relation classifier output.
// ---------------------------------------------------------------------------

enum class Relation { Positive, Negative };

inline const char* to_string(Relation r) {
    return r == Relation::Positive ? "positive" : "negative";
}

// Accepts either polarity vocabulary ("positive"/"stimulate" vs
// "negative"/"inhibit"), case-insensitive; the first recognised token wins.
inline Relation parse_relation(const std::string& text) {
    if (trim(text).empty()) throw ParseError("classifier reply empty");
    for (const std::string& tok : alnum_tokens(text)) {
        if (tok == "positive" || tok == "stimulate") return Relation::Positive;
        if (tok == "negative" || tok == "inhibit") return Relation::Negative;
    }
    throw ParseError("no relation label found in classifier reply");
}

}  // namespace hypoforge
