#pragma once
// Literature evidence: LLM-planned boolean query strategies, execution
// against the PubMed E-utilities protocol (or an in-memory corpus for
// offline runs), a monotone relaxation ladder for sparse results, and
// background summarization. A configured temporal cutoff is enforced twice:
// in the query date parameters and again by client-side re-filtering.

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "date.hpp"
#include "errors.hpp"
#include "gateway.hpp"
#include "kg.hpp"
#include "prompts.hpp"
#include "text.hpp"

namespace hypoforge {

// ---------------------------------------------------------------------------
// Query strategies.
// ---------------------------------------------------------------------------

enum class TermField { MESH, TIAB, ANY };

inline const char* to_string(TermField f) {
    switch (f) {
        case TermField::MESH: return "MESH";
        case TermField::TIAB: return "TIAB";
        case TermField::ANY: return "ANY";
    }
    return "?";
}

struct TermGroup {
    std::vector<std::string> terms;  // OR-combined
    TermField field = TermField::ANY;

    bool operator==(const TermGroup&) const = default;
};

struct DateRange {
    std::optional<Date> min_date;
    std::optional<Date> max_date;

    bool operator==(const DateRange&) const = default;
};

// Groups are AND-combined; terms within a group are OR-combined.
struct QueryStrategy {
    std::vector<TermGroup> groups;
    std::optional<DateRange> date_range;
    int retmax = 20;

    bool operator==(const QueryStrategy&) const = default;

    void validate() const {
        if (groups.empty()) throw InputError("query strategy has no term groups");
        for (const TermGroup& g : groups)
            if (g.terms.empty()) throw InputError("query strategy contains an empty term group");
        if (retmax < 1) throw InputError("retmax must be >= 1");
        if (date_range && date_range->min_date && date_range->max_date &&
            *date_range->max_date < *date_range->min_date)
            throw InputError("date range has min_date after max_date");
    }
};

// Renders the boolean term expression with PubMed field qualifiers, e.g.
//   ("GPR153"[MeSH Terms] OR "GPR153"[Title/Abstract]) AND ("vascular injury")
inline std::string render_query(const QueryStrategy& strategy) {
    strategy.validate();
    std::vector<std::string> group_texts;
    for (const TermGroup& g : strategy.groups) {
        std::vector<std::string> terms;
        for (const std::string& t : g.terms) {
            std::string quoted = "\"" + t + "\"";
            switch (g.field) {
                case TermField::MESH: terms.push_back(quoted + "[MeSH Terms]"); break;
                case TermField::TIAB: terms.push_back(quoted + "[Title/Abstract]"); break;
                case TermField::ANY: terms.push_back(quoted); break;
            }
        }
        group_texts.push_back("(" + join(terms, " OR ") + ")");
    }
    return join(group_texts, " AND ");
}

// ---------------------------------------------------------------------------
// Search modes and LLM query planning.
// ---------------------------------------------------------------------------

enum class SearchMode { Background, Evaluation, Revision };

inline const char* to_string(SearchMode m) {
    switch (m) {
        case SearchMode::Background: return "Background";
        case SearchMode::Evaluation: return "Evaluation";
        case SearchMode::Revision: return "Revision";
    }
    return "?";
}

struct SearchTask {
    SearchMode mode = SearchMode::Background;
    std::vector<std::string> keywords;
    std::optional<std::string> hypothesis;  // Evaluation and Revision
    std::optional<std::string> feedback;    // Revision only

    void validate() const {
        if (keywords.empty()) throw InputError("search task has no keywords");
        if (mode != SearchMode::Background && !hypothesis)
            throw ContextError(std::string(to_string(mode)) + " search requires a hypothesis");
        if (mode == SearchMode::Revision && !feedback)
            throw ContextError("Revision search requires critic feedback");
    }
};

struct QueryPlan {
    QueryStrategy strategy;
    AgentExchange exchange;
    std::vector<std::string> warnings;
};

namespace detail {

inline TermField field_from_string(const std::string& s) {
    if (s == "MESH") return TermField::MESH;
    if (s == "TIAB") return TermField::TIAB;
    if (s == "ANY") return TermField::ANY;
    throw ProtocolError("unknown field qualifier in query plan: '" + s + "'");
}

}  // namespace detail

// Asks the planner LLM for a strategy and hardens the result: empty terms
// dropped, the date ceiling clamped to the temporal cutoff, and structurally
// invalid replies rejected as protocol errors.
inline QueryPlan plan_queries(const SearchTask& task, ChatBackend& backend,
                              std::optional<Date> cutoff = std::nullopt,
                              double temperature = 0.3) {
    task.validate();

    std::vector<std::string> blocks;
    blocks.push_back(std::string("Mode: ") + to_string(task.mode));
    blocks.push_back("Keywords: " + join(task.keywords, ", "));
    if (task.hypothesis) blocks.push_back("Hypothesis: " + *task.hypothesis);
    if (task.feedback) blocks.push_back("Feedback:\n" + *task.feedback);

    QueryPlan plan;
    plan.exchange.prompt = RenderedPrompt{kQueryPlannerTemplate, join(blocks, "\n\n")};
    ChatRequest req{plan.exchange.prompt.system_prompt, plan.exchange.prompt.user_prompt,
                    temperature};
    plan.exchange.response = complete(backend, req);

    nlohmann::json j = nlohmann::json::parse(plan.exchange.response.text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("groups") || !j["groups"].is_array())
        throw ProtocolError("query planner reply is not the expected JSON object");

    QueryStrategy s;
    for (const auto& jg : j["groups"]) {
        if (!jg.is_object() || !jg.contains("terms") || !jg["terms"].is_array())
            throw ProtocolError("query plan group lacks a terms array");
        TermGroup g;
        g.field = detail::field_from_string(jg.value("field", "ANY"));
        for (const auto& t : jg["terms"]) {
            if (!t.is_string()) throw ProtocolError("query plan term is not a string");
            std::string term = trim(t.get<std::string>());
            if (!term.empty()) g.terms.push_back(term);
        }
        if (!g.terms.empty()) s.groups.push_back(std::move(g));
    }
    if (s.groups.empty()) throw ProtocolError("query plan contains no usable term groups");
    s.retmax = j.value("retmax", 20);
    if (s.retmax < 1) s.retmax = 20;

    if (j.contains("min_date")) {
        auto d = try_parse_date(j["min_date"].get<std::string>());
        if (d) {
            if (!s.date_range) s.date_range.emplace();
            s.date_range->min_date = d;
        }
    }
    if (j.contains("max_date")) {
        auto d = try_parse_date(j["max_date"].get<std::string>());
        if (d) {
            if (!s.date_range) s.date_range.emplace();
            s.date_range->max_date = d;
        }
    }
    if (cutoff) {
        if (!s.date_range) s.date_range.emplace();
        if (!s.date_range->max_date || *cutoff < *s.date_range->max_date) {
            if (s.date_range->max_date)
                plan.warnings.push_back("planner max_date " + s.date_range->max_date->iso() +
                                        " clamped to cutoff " + cutoff->iso());
            s.date_range->max_date = cutoff;
        }
    }
    s.validate();
    plan.strategy = std::move(s);
    return plan;
}

// ---------------------------------------------------------------------------
// Search clients.
// ---------------------------------------------------------------------------

class SearchClient {
  public:
    virtual ~SearchClient() = default;
    virtual std::vector<LiteratureRecord> search(const QueryStrategy& strategy) = 0;
};

// Executes a strategy and re-applies the date window client-side, so a
// record dated past the ceiling can never slip through on a lenient backend.
inline std::vector<LiteratureRecord> execute_search(const QueryStrategy& strategy,
                                                    SearchClient& client,
                                                    std::optional<Date> cutoff = std::nullopt) {
    strategy.validate();
    std::vector<LiteratureRecord> out;
    for (LiteratureRecord& r : client.search(strategy)) {
        if (strategy.date_range) {
            if (strategy.date_range->min_date && r.pub_date < *strategy.date_range->min_date)
                continue;
            if (strategy.date_range->max_date && *strategy.date_range->max_date < r.pub_date)
                continue;
        }
        if (cutoff && *cutoff < r.pub_date) continue;
        out.push_back(std::move(r));
        if (static_cast<int>(out.size()) >= strategy.retmax) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Relaxation ladder.
// ---------------------------------------------------------------------------

// Applies one relaxation stage to a (possibly already relaxed) strategy:
//   stage 1: widen every field qualifier to ANY
//   stage 2: merge the two least-populous groups (one fewer AND constraint)
//   stage 3: drop the least-populous group entirely
//   stage 4+: nullopt - the ladder is exhausted
// The date window is never relaxed.
inline std::optional<QueryStrategy> relax(const QueryStrategy& strategy, int stage) {
    if (stage < 1) throw InputError("relaxation stage must be >= 1");
    if (stage >= 4) return std::nullopt;
    QueryStrategy s = strategy;

    auto least_populous = [&](size_t skip = SIZE_MAX) {
        size_t best = SIZE_MAX;
        for (size_t i = 0; i < s.groups.size(); ++i) {
            if (i == skip) continue;
            if (best == SIZE_MAX || s.groups[i].terms.size() < s.groups[best].terms.size())
                best = i;
        }
        return best;
    };

    switch (stage) {
        case 1:
            for (TermGroup& g : s.groups) g.field = TermField::ANY;
            break;
        case 2: {
            if (s.groups.size() < 2) break;
            size_t a = least_populous();
            size_t b = least_populous(a);
            if (a > b) std::swap(a, b);
            TermGroup merged;
            merged.field = s.groups[a].field == s.groups[b].field ? s.groups[a].field
                                                                  : TermField::ANY;
            merged.terms = s.groups[a].terms;
            merged.terms.insert(merged.terms.end(), s.groups[b].terms.begin(),
                                s.groups[b].terms.end());
            s.groups[a] = std::move(merged);
            s.groups.erase(s.groups.begin() + static_cast<long>(b));
            break;
        }
        case 3:
            if (s.groups.size() < 2) break;  // cannot drop the last group
            s.groups.erase(s.groups.begin() + static_cast<long>(least_populous()));
            break;
    }
    return s;
}

struct SearchOutcome {
    std::vector<LiteratureRecord> records;
    int stages_applied = 0;
    bool exhausted = false;  // ladder ran out before reaching min_hits
};

// Runs a strategy, walking the relaxation ladder until enough records are
// found or the ladder is exhausted (in which case the last stage's records
// are returned - possibly none).
inline SearchOutcome search_with_relaxation(const QueryStrategy& strategy, SearchClient& client,
                                            std::optional<Date> cutoff = std::nullopt,
                                            int min_hits = 3) {
    if (min_hits < 1) throw InputError("min_hits must be >= 1");
    SearchOutcome outcome;
    QueryStrategy current = strategy;
    for (int stage = 1;; ++stage) {
        outcome.records = execute_search(current, client, cutoff);
        if (static_cast<int>(outcome.records.size()) >= min_hits) return outcome;
        auto next = relax(current, stage);
        if (!next) {
            outcome.exhausted = true;
            return outcome;
        }
        current = std::move(*next);
        outcome.stages_applied = stage;
    }
}

// ---------------------------------------------------------------------------
// In-memory corpus client (offline runs, relaxation oracle).
// ---------------------------------------------------------------------------

struct CorpusDoc {
    LiteratureRecord record;
    std::vector<std::string> mesh_terms;
};

// Evaluates strategies against an in-memory document set using the same
// AND/OR/field semantics the live service applies. Results are ordered
// newest first (ties by pmid) so runs are reproducible.
class CorpusSearchClient : public SearchClient {
  public:
    CorpusSearchClient() = default;
    explicit CorpusSearchClient(std::vector<CorpusDoc> docs) : docs_(std::move(docs)) {}

    void add(CorpusDoc doc) { docs_.push_back(std::move(doc)); }
    const std::vector<CorpusDoc>& docs() const { return docs_; }

    std::vector<LiteratureRecord> search(const QueryStrategy& strategy) override {
        strategy.validate();
        std::vector<const CorpusDoc*> hits;
        for (const CorpusDoc& d : docs_)
            if (matches(d, strategy)) hits.push_back(&d);
        std::sort(hits.begin(), hits.end(), [](const CorpusDoc* a, const CorpusDoc* b) {
            if (a->record.pub_date != b->record.pub_date)
                return b->record.pub_date < a->record.pub_date;
            return a->record.pmid < b->record.pmid;
        });
        std::vector<LiteratureRecord> out;
        for (const CorpusDoc* d : hits) {
            out.push_back(d->record);
            if (static_cast<int>(out.size()) >= strategy.retmax) break;
        }
        return out;
    }

    // Date-window and boolean matching, shared with tests that verify the
    // relaxation ladder only ever widens the matched set.
    static bool matches(const CorpusDoc& doc, const QueryStrategy& strategy) {
        if (strategy.date_range) {
            if (strategy.date_range->min_date && doc.record.pub_date < *strategy.date_range->min_date)
                return false;
            if (strategy.date_range->max_date && *strategy.date_range->max_date < doc.record.pub_date)
                return false;
        }
        for (const TermGroup& g : strategy.groups) {
            bool any = false;
            for (const std::string& term : g.terms) {
                if (term_matches(doc, term, g.field)) {
                    any = true;
                    break;
                }
            }
            if (!any) return false;
        }
        return true;
    }

  private:
    static bool term_matches(const CorpusDoc& doc, const std::string& term, TermField field) {
        auto in_mesh = [&] {
            for (const std::string& m : doc.mesh_terms)
                if (to_lower(m) == to_lower(term)) return true;
            return false;
        };
        auto in_tiab = [&] {
            return contains_ci(doc.record.title, term) ||
                   contains_ci(doc.record.abstract_text, term);
        };
        switch (field) {
            case TermField::MESH: return in_mesh();
            case TermField::TIAB: return in_tiab();
            case TermField::ANY: return in_mesh() || in_tiab();
        }
        return false;
    }

    std::vector<CorpusDoc> docs_;
};

// Corpus files are JSONL: {"pmid", "title", "abstract", "pub_date", "mesh"}.
inline std::vector<CorpusDoc> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open corpus file: " + path);
    std::vector<CorpusDoc> docs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw LoadError("corpus line " + std::to_string(lineno) + " is not valid JSON");
        CorpusDoc d;
        d.record.pmid = j.at("pmid").get<std::string>();
        d.record.title = j.at("title").get<std::string>();
        d.record.abstract_text = j.value("abstract", "");
        d.record.pub_date = parse_date(j.at("pub_date").get<std::string>());
        for (const auto& m : j.value("mesh", nlohmann::json::array()))
            d.mesh_terms.push_back(m.get<std::string>());
        docs.push_back(std::move(d));
    }
    return docs;
}

inline void write_corpus_jsonl(const std::vector<CorpusDoc>& docs, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError("cannot open corpus file for writing: " + path);
    for (const CorpusDoc& d : docs) {
        nlohmann::json j{{"pmid", d.record.pmid},
                         {"title", d.record.title},
                         {"abstract", d.record.abstract_text},
                         {"pub_date", d.record.pub_date.iso()},
                         {"mesh", d.mesh_terms}};
        out << j.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// PubMed E-utilities client.
// ---------------------------------------------------------------------------

inline std::string url_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else if (c == ' ') {
            out += '+';
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xf];
        }
    }
    return out;
}

inline std::string form_encode(const std::vector<std::pair<std::string, std::string>>& params) {
    std::vector<std::string> parts;
    for (const auto& [k, v] : params) parts.push_back(k + "=" + url_encode(v));
    return join(parts, "&");
}

namespace detail {

// Minimal tag extraction for the efetch XML payload. Not a general XML
// parser: it only lifts the handful of fields the record needs.
inline std::vector<std::string> tag_bodies(const std::string& xml, const std::string& tag,
                                           size_t from = 0, size_t to = std::string::npos) {
    std::vector<std::string> out;
    std::string open = "<" + tag;
    std::string close = "</" + tag + ">";
    size_t limit = to == std::string::npos ? xml.size() : to;
    size_t pos = from;
    while ((pos = xml.find(open, pos)) != std::string::npos && pos < limit) {
        size_t body_start = xml.find('>', pos);
        if (body_start == std::string::npos) break;
        ++body_start;
        size_t end = xml.find(close, body_start);
        if (end == std::string::npos || end > limit) break;
        out.push_back(xml.substr(body_start, end - body_start));
        pos = end + close.size();
    }
    return out;
}

inline std::string strip_tags(const std::string& s) {
    std::string out;
    bool in_tag = false;
    for (char c : s) {
        if (c == '<') in_tag = true;
        else if (c == '>') in_tag = false;
        else if (!in_tag) out += c;
    }
    return out;
}

inline int month_number(const std::string& m) {
    static const std::map<std::string, int> names = {
        {"jan", 1}, {"feb", 2}, {"mar", 3}, {"apr", 4},  {"may", 5},  {"jun", 6},
        {"jul", 7}, {"aug", 8}, {"sep", 9}, {"oct", 10}, {"nov", 11}, {"dec", 12}};
    std::string t = to_lower(trim(m));
    if (t.empty()) return 1;
    auto it = names.find(t.substr(0, 3));
    if (it != names.end()) return it->second;
    try {
        int v = std::stoi(t);
        return v >= 1 && v <= 12 ? v : 1;
    } catch (const std::exception&) {
        return 1;
    }
}

}  // namespace detail

struct PubMedConfig {
    std::string base_url = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";
    std::string api_key;  // raises the rate cap from 3/s to 10/s
    RetryPolicy retry;

    static PubMedConfig from_env() {
        PubMedConfig c;
        if (const char* key = std::getenv("HYPOFORGE_NCBI_KEY")) c.api_key = key;
        return c;
    }
};

// E-utilities search: esearch.fcgi for ids, efetch.fcgi for records.
// Requests are rate limited to the documented per-key caps and retried on
// transient failures.
class PubMedClient : public SearchClient {
  public:
    PubMedClient(PubMedConfig config, HttpTransport& transport,
                 std::shared_ptr<RateLimiter> limiter = nullptr)
        : config_(std::move(config)), transport_(transport), limiter_(std::move(limiter)) {
        if (!limiter_)
            limiter_ = std::make_shared<RateLimiter>(config_.api_key.empty() ? 3.0 : 10.0);
    }

    std::vector<LiteratureRecord> search(const QueryStrategy& strategy) override {
        std::vector<std::string> ids = esearch(strategy);
        if (ids.empty()) return {};
        return efetch(ids);
    }

  private:
    HttpResult call(const std::string& endpoint,
                    std::vector<std::pair<std::string, std::string>> params) {
        if (!config_.api_key.empty()) params.emplace_back("api_key", config_.api_key);
        HttpResult r = post_with_retry(
            transport_, config_.base_url + "/" + endpoint,
            {{"Content-Type", "application/x-www-form-urlencoded"}}, form_encode(params),
            config_.retry, limiter_.get());
        if (r.status < 200 || r.status >= 300)
            throw TransportError(endpoint + " rejected with HTTP " + std::to_string(r.status));
        return r;
    }

    std::vector<std::string> esearch(const QueryStrategy& strategy) {
        std::vector<std::pair<std::string, std::string>> params = {
            {"db", "pubmed"},
            {"term", render_query(strategy)},
            {"retmode", "json"},
            {"retmax", std::to_string(strategy.retmax)},
        };
        if (strategy.date_range && (strategy.date_range->min_date || strategy.date_range->max_date)) {
            params.emplace_back("datetype", "pdat");
            Date lo = strategy.date_range->min_date.value_or(Date{1800, 1, 1});
            Date hi = strategy.date_range->max_date.value_or(Date{3000, 12, 31});
            params.emplace_back("mindate", lo.slashed());
            params.emplace_back("maxdate", hi.slashed());
        }
        HttpResult r = call("esearch.fcgi", std::move(params));
        nlohmann::json j = nlohmann::json::parse(r.body, nullptr, false);
        if (j.is_discarded() || !j.contains("esearchresult") ||
            !j["esearchresult"].contains("idlist"))
            throw ProtocolError("esearch reply lacks esearchresult.idlist");
        std::vector<std::string> ids;
        for (const auto& id : j["esearchresult"]["idlist"]) ids.push_back(id.get<std::string>());
        return ids;
    }

    std::vector<LiteratureRecord> efetch(const std::vector<std::string>& ids) {
        HttpResult r = call("efetch.fcgi",
                            {{"db", "pubmed"}, {"id", join(ids, ",")}, {"retmode", "xml"}});
        std::vector<LiteratureRecord> out;
        for (const std::string& article : detail::tag_bodies(r.body, "PubmedArticle")) {
            LiteratureRecord rec;
            auto pmids = detail::tag_bodies(article, "PMID");
            auto titles = detail::tag_bodies(article, "ArticleTitle");
            if (pmids.empty() || titles.empty())
                throw ProtocolError("efetch article lacks PMID or ArticleTitle");
            rec.pmid = trim(pmids.front());
            rec.title = trim(detail::strip_tags(titles.front()));
            std::vector<std::string> abs_parts;
            for (const std::string& a : detail::tag_bodies(article, "AbstractText"))
                abs_parts.push_back(trim(detail::strip_tags(a)));
            rec.abstract_text = join(abs_parts, " ");
            auto dates = detail::tag_bodies(article, "PubDate");
            if (!dates.empty()) {
                auto years = detail::tag_bodies(dates.front(), "Year");
                auto months = detail::tag_bodies(dates.front(), "Month");
                auto days = detail::tag_bodies(dates.front(), "Day");
                if (!years.empty()) {
                    try {
                        rec.pub_date.year = std::stoi(trim(years.front()));
                    } catch (const std::exception&) {
                        throw ProtocolError("efetch PubDate year not numeric");
                    }
                    rec.pub_date.month = months.empty() ? 1 : detail::month_number(months.front());
                    rec.pub_date.day = 1;
                    if (!days.empty()) {
                        try {
                            rec.pub_date.day = std::stoi(trim(days.front()));
                        } catch (const std::exception&) {
                            rec.pub_date.day = 1;
                        }
                    }
                }
            }
            out.push_back(std::move(rec));
        }
        return out;
    }

    PubMedConfig config_;
    HttpTransport& transport_;
    std::shared_ptr<RateLimiter> limiter_;
};

// ---------------------------------------------------------------------------
// Background summarization.
// ---------------------------------------------------------------------------

// Renders records as the metadata blocks the Background prompt expects.
inline std::string format_records(const std::vector<LiteratureRecord>& records) {
    std::vector<std::string> blocks;
    for (const LiteratureRecord& r : records) {
        std::ostringstream b;
        b << "PMID: " << r.pmid << "\nTitle: " << r.title << "\nDate: " << r.pub_date.iso()
          << "\nAbstract: " << r.abstract_text;
        blocks.push_back(b.str());
    }
    return join(blocks, "\n\n");
}

struct BackgroundSummary {
    std::string text;
    AgentExchange exchange;
    std::vector<std::string> warnings;
};

// Summarizes retrieved records into the background paragraph. The 150-word
// ceiling from the prompt is checked but over-length replies are kept with a
// warning - dropping a usable background would be worse than logging.
inline BackgroundSummary summarize_background(const std::vector<LiteratureRecord>& records,
                                              ChatBackend& backend,
                                              const std::vector<std::string>& keywords = {},
                                              double temperature = 0.3) {
    if (records.empty()) throw InputError("cannot summarize zero records");

    PromptContext ctx;
    ctx.role = AgentRole::Background;
    ctx.keywords = keywords;
    ctx.new_information = format_records(records);

    BackgroundSummary out;
    out.exchange.prompt = render_prompt(ctx);
    ChatRequest req{out.exchange.prompt.system_prompt, out.exchange.prompt.user_prompt,
                    temperature};
    out.exchange.response = complete(backend, req);
    out.text = trim(out.exchange.response.text);
    if (out.text.empty()) throw ProtocolError("background summarizer returned an empty reply");
    long words = word_count(out.text);
    if (words > 150)
        out.warnings.push_back("background summary has " + std::to_string(words) +
                               " words (prompt asks for < 150)");
    return out;
}

}  // namespace hypoforge
