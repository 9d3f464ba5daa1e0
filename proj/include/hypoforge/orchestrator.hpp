#pragma once
// Pipeline state machine: background retrieval, knowledge-graph exploration,
// hypothesis generation across parallel branches, the Critic -> Reviewer ->
// Refiner refinement cycle with its decision rule, and final ranked
// selection. Every agent call is appended to the run trace; branch workers
// buffer their steps and flush in branch order so traces are reproducible.

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "digest.hpp"
#include "embed.hpp"
#include "errors.hpp"
#include "gateway.hpp"
#include "kg.hpp"
#include "literature.hpp"
#include "parsers.hpp"
#include "prompts.hpp"
#include "trace.hpp"

namespace hypoforge {

// Knowledge-graph retrieval defaults for the initial broad exploration;
// Reviewer overrides replace depth and relation filter during refinement.
inline constexpr int kInitialDepth = 2;
inline constexpr int kLinkCandidatesPerKeyword = 5;

enum class BranchStatus { Active, Accepted, Discarded, Exhausted };

inline const char* to_string(BranchStatus s) {
    switch (s) {
        case BranchStatus::Active: return "Active";
        case BranchStatus::Accepted: return "Accepted";
        case BranchStatus::Discarded: return "Discarded";
        case BranchStatus::Exhausted: return "Exhausted";
    }
    return "?";
}

struct BranchState {
    Hypothesis hypothesis;
    EvidenceBundle evidence;
    int cycle = 0;  // refinement cycles completed, never exceeds max_cycles
    BranchStatus status = BranchStatus::Active;
};

enum class Decision { Accept, Refine, Discard, Exhaust };

inline const char* to_string(Decision d) {
    switch (d) {
        case Decision::Accept: return "Accept";
        case Decision::Refine: return "Refine";
        case Decision::Discard: return "Discard";
        case Decision::Exhaust: return "Exhaust";
    }
    return "?";
}

// The decision module: accept once the overall score clears the threshold,
// keep refining while cycles remain, and otherwise exhaust (emit) or discard
// depending on the floor.
inline Decision decide(const MetricScores& scores, int cycle, const PipelineConfig& config) {
    int overall = overall_score(scores);
    if (overall >= config.accept_threshold) return Decision::Accept;
    if (cycle < config.max_cycles) return Decision::Refine;
    return overall >= config.emit_floor ? Decision::Exhaust : Decision::Discard;
}

struct RankedOutput {
    Hypothesis hypothesis;
    MetricScores scores;
    EvidenceBundle evidence;
    BranchStatus status = BranchStatus::Accepted;
};

struct RunResult {
    std::string run_id;
    std::vector<RankedOutput> outputs;  // overall desc, then generation, then id
    std::vector<Hypothesis> discarded;
    std::string trace_path;
    std::optional<std::string> plan_text;
    long tokens_in = 0;
    long tokens_out = 0;
    std::vector<std::string> warnings;
};

struct Services {
    ChatBackend* backend = nullptr;
    TraceSink* trace = nullptr;
    const GraphStore* graph = nullptr;
    SearchClient* literature = nullptr;
    const Embedder* embedder = nullptr;

    void validate() const {
        if (!backend) throw InputError("services: chat backend not wired");
        if (!trace) throw InputError("services: trace sink not wired");
        if (!graph) throw InputError("services: graph store not wired");
        if (!literature) throw InputError("services: literature client not wired");
        if (!embedder) throw InputError("services: embedder not wired");
    }
};

// Splits a topic phrase into content keywords (stop words dropped, first
// occurrence kept) for keyword linking and query planning.
inline std::vector<std::string> derive_keywords(const std::string& topic) {
    static const std::set<std::string> stop = {"of", "in", "and", "the", "a",  "an",
                                              "for", "on", "with", "to", "role", "via"};
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        std::string key = to_lower(cur);
        if (!stop.count(key) && seen.insert(key).second) out.push_back(cur);
        cur.clear();
    };
    for (char c : topic) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
            cur += c;
        else
            flush();
    }
    flush();
    return out;
}

// Optional step 1: ask the Planner for a numbered workflow summary. Failures
// are tolerated by callers - the plan never affects control flow.
inline std::string emit_plan(const std::string& topic, ChatBackend& backend,
                             double temperature = 0.3) {
    if (trim(topic).empty()) throw InputError("topic empty");
    PromptContext ctx;
    ctx.role = AgentRole::Planner;
    ctx.keywords = {topic};
    RenderedPrompt p = render_prompt(ctx);
    ChatResponse r = complete(backend, ChatRequest{p.system_prompt, p.user_prompt, temperature});
    if (trim(r.text).empty()) throw ProtocolError("planner returned an empty plan");
    return r.text;
}

namespace detail {

// Structured evidence a branch accumulates across refinement cycles.
// Deduplication keys: pmid for literature, (src, relation, dst) for edges.
struct BranchEvidence {
    std::string background;
    Subgraph subgraph;
    bool has_subgraph = false;
    std::vector<LiteratureRecord> records;
    std::set<std::string> pmids;

    int add_records(const std::vector<LiteratureRecord>& incoming) {
        int added = 0;
        for (const LiteratureRecord& r : incoming)
            if (pmids.insert(r.pmid).second) {
                records.push_back(r);
                ++added;
            }
        return added;
    }

    EvidenceBundle bundle() const {
        EvidenceBundle b;
        b.literature = records;
        if (has_subgraph) b.subgraph_text = serialize_subgraph(subgraph);
        if (!background.empty()) b.background = background;
        return b;
    }

    // The references block every Critic evaluation receives: current
    // subgraph plus the accumulated literature records.
    std::string references_text() const {
        std::vector<std::string> parts;
        if (has_subgraph) parts.push_back(serialize_subgraph(subgraph));
        if (!records.empty()) parts.push_back(format_records(records));
        return join(parts, "\n\n");
    }
};

// A step recorded by a branch worker before indexes are assigned.
struct PendingStep {
    AgentRole role = AgentRole::Critic;
    std::string input_digest;
    std::string output_text;
    long tokens_in = 0;
    long tokens_out = 0;
    std::string timestamp;
};

struct StepBuffer {
    std::vector<PendingStep> steps;

    void record(AgentRole role, const RenderedPrompt& prompt, const ChatResponse& response) {
        steps.push_back({role, prompt_digest(prompt.system_prompt, prompt.user_prompt),
                         response.text, response.tokens_in, response.tokens_out, now_rfc3339()});
    }

    void warn(AgentRole role, const std::string& message) {
        std::string text = "WARNING: " + message;
        steps.push_back({role, text_digest(text), text, 0, 0, now_rfc3339()});
    }
};

struct BranchResult {
    std::vector<Hypothesis> versions;  // every scored version, in order
    BranchStatus status = BranchStatus::Discarded;
    EvidenceBundle evidence;
    StepBuffer steps;
    std::vector<std::string> warnings;
    std::vector<int> critic_overalls;
};

// Everything a branch worker needs, shared across branches. All members are
// concurrency-safe (read-only stores, mutex-guarded sinks, atomic budget).
struct RunContext {
    const PipelineConfig* config;
    Services services;
    TokenBudget* budget;
    std::vector<std::string> keywords;
    std::string background;
    std::string subgraph_text;
    Subgraph initial_subgraph;
    std::vector<std::string> seeds;  // node ids anchoring KG refinement
};

inline ChatResponse call_agent(const RunContext& rc, StepBuffer& buf, AgentRole role,
                               const RenderedPrompt& prompt) {
    ChatRequest req{prompt.system_prompt, prompt.user_prompt, rc.config->temperature,
                    rc.config->seed};
    ChatResponse resp = complete(*rc.services.backend, req);
    rc.budget->charge(resp);
    buf.record(role, prompt, resp);
    return resp;
}

// Applies a Reviewer directive: each action fetches one evidence delta and
// merges it into the branch evidence. Returns the textual delta for the
// Refiner, or nullopt when every action failed.
inline std::optional<std::string> apply_directive(const RunContext& rc, StepBuffer& buf,
                                                  const RefinementDirective& directive,
                                                  BranchEvidence& evidence,
                                                  const Hypothesis& hypothesis,
                                                  const std::string& critic_text,
                                                  std::vector<std::string>& warnings) {
    if (directive.actions.empty()) throw ProtocolError("directive has zero actions");
    std::vector<std::string> deltas;

    for (RefineAction action : directive.actions) {
        try {
            switch (action) {
                case RefineAction::KG: {
                    std::optional<std::set<std::string>> filter;
                    if (directive.rels_override)
                        filter.emplace(directive.rels_override->begin(),
                                       directive.rels_override->end());
                    Subgraph delta = retrieve_subgraph(
                        *rc.services.graph, rc.seeds,
                        directive.depth_override.value_or(kInitialDepth), filter);
                    merge_subgraph(evidence.subgraph, delta);
                    evidence.has_subgraph = true;
                    deltas.push_back("Knowledge graph evidence:\n" + serialize_subgraph(delta));
                    break;
                }
                case RefineAction::LITERATURE: {
                    SearchTask task;
                    task.mode = SearchMode::Revision;
                    task.keywords = rc.keywords;
                    task.hypothesis = hypothesis.text;
                    task.feedback = critic_text;
                    QueryPlan plan = plan_queries(task, *rc.services.backend,
                                                  rc.config->temporal_cutoff,
                                                  rc.config->temperature);
                    rc.budget->charge(plan.exchange.response);
                    buf.record(AgentRole::Reviewer, plan.exchange.prompt, plan.exchange.response);
                    for (const std::string& w : plan.warnings) warnings.push_back(w);
                    SearchOutcome found = search_with_relaxation(
                        plan.strategy, *rc.services.literature, rc.config->temporal_cutoff,
                        rc.config->relaxation_min_hits);
                    std::vector<LiteratureRecord> fresh;
                    for (const LiteratureRecord& r : found.records)
                        if (!evidence.pmids.count(r.pmid)) fresh.push_back(r);
                    if (fresh.empty()) throw InputError("no new literature records found");
                    evidence.add_records(fresh);
                    deltas.push_back("New literature:\n" + format_records(fresh));
                    break;
                }
                case RefineAction::BACKGROUND: {
                    SearchTask task;
                    task.mode = SearchMode::Background;
                    task.keywords = rc.keywords;
                    QueryPlan plan = plan_queries(task, *rc.services.backend,
                                                  rc.config->temporal_cutoff,
                                                  rc.config->temperature);
                    rc.budget->charge(plan.exchange.response);
                    buf.record(AgentRole::Background, plan.exchange.prompt,
                               plan.exchange.response);
                    SearchOutcome found = search_with_relaxation(
                        plan.strategy, *rc.services.literature, rc.config->temporal_cutoff,
                        rc.config->relaxation_min_hits);
                    BackgroundSummary summary = summarize_background(
                        found.records, *rc.services.backend, rc.keywords,
                        rc.config->temperature);
                    rc.budget->charge(summary.exchange.response);
                    buf.record(AgentRole::Background, summary.exchange.prompt,
                               summary.exchange.response);
                    for (const std::string& w : summary.warnings) warnings.push_back(w);
                    evidence.background = summary.text;  // prior version stays in the trace
                    deltas.push_back("Updated background:\n" + summary.text);
                    break;
                }
            }
        } catch (const Error& e) {
            warnings.push_back(std::string("refinement action ") + action_token(action) +
                               " failed: " + e.what());
        }
    }
    if (deltas.empty()) return std::nullopt;
    return join(deltas, "\n\n");
}

// Runs one hypothesis branch through evaluate -> decide -> refine cycles.
inline BranchResult run_branch(const RunContext& rc, const std::string& branch_id,
                               const std::string& initial_text) {
    BranchResult result;
    BranchEvidence evidence;
    evidence.background = rc.background;
    evidence.subgraph = rc.initial_subgraph;
    evidence.has_subgraph = true;

    Hypothesis current;
    current.id = branch_id + "-g0";
    current.text = initial_text;
    current.generation = 0;

    auto evaluate = [&](Hypothesis& h) -> CriticReview {
        PromptContext ctx;
        ctx.role = AgentRole::Critic;
        ctx.background = evidence.background;
        ctx.hypothesis = h.text;
        std::string refs = evidence.references_text();
        if (!refs.empty()) ctx.new_information = refs;
        ChatResponse resp = call_agent(rc, result.steps, AgentRole::Critic, render_prompt(ctx));
        CriticReview review = parse_critic(resp.text);
        h.scores = review.scores;
        h.rationale = review.rationales;
        result.critic_overalls.push_back(review.stated_overall);
        return review;
    };

    std::string critic_text;
    for (int cycle = 0;; ++cycle) {
        if (rc.budget->decision() == BudgetDecision::Halt) {
            result.warnings.push_back("token budget exhausted; branch " + branch_id +
                                      " stopped early");
            break;
        }
        CriticReview review = evaluate(current);
        result.versions.push_back(current);

        // Keep the raw critic text for the Reviewer and Refiner prompts.
        critic_text = result.steps.steps.back().output_text;

        Decision d = decide(review.scores, cycle, *rc.config);
        if (d == Decision::Accept) {
            result.status = BranchStatus::Accepted;
            break;
        }
        if (d == Decision::Discard) {
            result.status = BranchStatus::Discarded;
            break;
        }
        if (d == Decision::Exhaust) {
            result.status = BranchStatus::Exhausted;
            break;
        }

        // Refine: Reviewer picks evidence actions, the Refiner rewrites.
        PromptContext rev_ctx;
        rev_ctx.role = AgentRole::Reviewer;
        rev_ctx.critic_feedback = critic_text;
        rev_ctx.hypothesis = current.text;
        rev_ctx.background = evidence.background;
        ChatResponse rev_resp =
            call_agent(rc, result.steps, AgentRole::Reviewer, render_prompt(rev_ctx));
        RefinementDirective directive = parse_reviewer(rev_resp.text);

        std::optional<std::string> delta = apply_directive(
            rc, result.steps, directive, evidence, current, critic_text, result.warnings);
        std::string new_information;
        if (delta) {
            new_information = *delta;
        } else {
            result.steps.warn(AgentRole::Reviewer,
                              "all refinement actions failed; refining with stale evidence");
            new_information = "No new information retrieved; all refinement actions failed.";
        }

        PromptContext ref_ctx;
        ref_ctx.role = AgentRole::Refiner;
        ref_ctx.hypothesis = current.text;
        ref_ctx.critic_feedback = critic_text;
        ref_ctx.new_information = new_information;
        ChatResponse ref_resp =
            call_agent(rc, result.steps, AgentRole::Refiner, render_prompt(ref_ctx));
        RefinerReply refined = parse_refiner(ref_resp.text);
        for (const std::string& w : refined.warnings) result.warnings.push_back(w);

        Hypothesis next;
        next.id = branch_id + "-g" + std::to_string(current.generation + 1);
        next.text = refined.refined_hypothesis;
        next.generation = current.generation + 1;
        next.parent_id = current.id;
        current = std::move(next);
    }

    result.evidence = evidence.bundle();
    return result;
}

}  // namespace detail

// Deterministic run identifier from the inputs that define the run.
inline std::string derive_run_id(const std::string& topic, const PipelineConfig& config) {
    std::ostringstream key;
    key << topic << '\x1e' << config.seed << '\x1e' << config.max_cycles << '\x1e'
        << config.accept_threshold << '\x1e' << config.emit_floor << '\x1e'
        << (config.temporal_cutoff ? config.temporal_cutoff->iso() : "-");
    return "run-" + text_digest(key.str());
}

// Executes the full pipeline for one topic. All agent calls are traced under
// a deterministic run id; branch steps are flushed in branch order so a
// scripted backend yields byte-identical traces (timestamps aside).
inline RunResult run_pipeline(const std::string& topic, const PipelineConfig& config,
                              const Services& services,
                              const std::vector<std::string>& user_keywords = {}) {
    if (trim(topic).empty()) throw InputError("topic empty");
    config.validate();
    services.validate();

    RunResult result;
    result.run_id = derive_run_id(topic, config);
    result.trace_path = services.trace->path();
    services.trace->open_run(result.run_id);

    TokenBudget budget(config.token_limit);
    int next_index = 0;
    auto append = [&](AgentRole role, const std::string& digest, const std::string& text,
                      long tin, long tout) {
        services.trace->append(StepRecord{result.run_id, next_index++, role, digest, text, tin,
                                          tout, now_rfc3339()});
    };
    auto append_exchange = [&](AgentRole role, const AgentExchange& ex) {
        budget.charge(ex.response);
        append(role, prompt_digest(ex.prompt.system_prompt, ex.prompt.user_prompt),
               ex.response.text, ex.response.tokens_in, ex.response.tokens_out);
    };

    // Step 1 (optional): research plan. Failures never stop the run.
    if (config.emit_plan) {
        PromptContext ctx;
        ctx.role = AgentRole::Planner;
        ctx.keywords = {topic};
        RenderedPrompt p = render_prompt(ctx);
        try {
            ChatResponse r = complete(*services.backend,
                                      ChatRequest{p.system_prompt, p.user_prompt,
                                                  config.temperature, config.seed});
            budget.charge(r);
            append(AgentRole::Planner, prompt_digest(p.system_prompt, p.user_prompt), r.text,
                   r.tokens_in, r.tokens_out);
            result.plan_text = r.text;
        } catch (const Error& e) {
            std::string warning = std::string("planner failed: ") + e.what();
            result.warnings.push_back(warning);
            append(AgentRole::Planner, text_digest(warning), "WARNING: " + warning, 0, 0);
        }
    }

    std::vector<std::string> keywords = user_keywords.empty() ? derive_keywords(topic)
                                                              : user_keywords;
    if (keywords.empty()) throw InputError("no usable keywords derived from topic");

    // Step 2: literature background.
    SearchTask bg_task;
    bg_task.mode = SearchMode::Background;
    bg_task.keywords = keywords;
    QueryPlan bg_plan =
        plan_queries(bg_task, *services.backend, config.temporal_cutoff, config.temperature);
    append_exchange(AgentRole::Background, bg_plan.exchange);
    for (const std::string& w : bg_plan.warnings) result.warnings.push_back(w);

    SearchOutcome bg_found = search_with_relaxation(bg_plan.strategy, *services.literature,
                                                    config.temporal_cutoff,
                                                    config.relaxation_min_hits);
    if (bg_found.exhausted && bg_found.records.empty())
        result.warnings.push_back("background search exhausted the relaxation ladder with no hits");

    BackgroundSummary summary = summarize_background(bg_found.records, *services.backend,
                                                     keywords, config.temperature);
    append_exchange(AgentRole::Background, summary.exchange);
    for (const std::string& w : summary.warnings) result.warnings.push_back(w);

    // Step 3: knowledge-graph exploration around the linked keywords.
    auto linked = link_keywords(*services.graph, keywords, *services.embedder,
                                kLinkCandidatesPerKeyword);
    std::vector<EntityNode> candidates;
    std::set<std::string> seen_ids;
    for (const auto& per_keyword : linked)
        for (const LinkCandidate& c : per_keyword)
            if (seen_ids.insert(c.node.node_id).second) candidates.push_back(c.node);
    if (candidates.empty()) throw InputError("keyword linking produced no candidate nodes");

    NodeSelection selection = select_nodes(candidates, summary.text, *services.backend,
                                           config.temperature);
    append_exchange(AgentRole::Explorer, selection.exchange);
    for (const std::string& w : selection.warnings) result.warnings.push_back(w);

    std::vector<std::string> seeds;
    for (const EntityNode& n : selection.nodes) seeds.push_back(n.node_id);
    Subgraph initial = retrieve_subgraph(*services.graph, seeds, kInitialDepth);

    // Step 4: initial hypotheses, one branch each.
    PromptContext sci_ctx;
    sci_ctx.role = AgentRole::Scientist;
    sci_ctx.background = summary.text;
    sci_ctx.subgraph_text = serialize_subgraph(initial);
    RenderedPrompt sci_prompt = render_prompt(sci_ctx);
    ChatResponse sci_resp = complete(
        *services.backend,
        ChatRequest{sci_prompt.system_prompt, sci_prompt.user_prompt, config.temperature,
                    config.seed});
    budget.charge(sci_resp);
    append(AgentRole::Scientist, prompt_digest(sci_prompt.system_prompt, sci_prompt.user_prompt),
           sci_resp.text, sci_resp.tokens_in, sci_resp.tokens_out);
    HypothesisLines parsed = parse_hypotheses(sci_resp.text);
    for (const std::string& w : parsed.warnings) result.warnings.push_back(w);
    if (static_cast<int>(parsed.values.size()) > config.n_initial_hypotheses) {
        result.warnings.push_back("scientist returned more hypotheses than configured; keeping " +
                                  std::to_string(config.n_initial_hypotheses));
        parsed.values.resize(config.n_initial_hypotheses);
    }

    detail::RunContext rc;
    rc.config = &config;
    rc.services = services;
    rc.budget = &budget;
    rc.keywords = keywords;
    rc.background = summary.text;
    rc.subgraph_text = sci_ctx.subgraph_text.value();
    rc.initial_subgraph = initial;
    rc.seeds = seeds;

    // Steps 5-7: branches refine concurrently; steps flush in branch order.
    std::vector<std::future<detail::BranchResult>> futures;
    for (size_t i = 0; i < parsed.values.size(); ++i) {
        std::string branch_id = "b" + std::to_string(i + 1);
        std::string text = parsed.values[i];
        futures.push_back(std::async(std::launch::async, [&rc, branch_id, text] {
            return detail::run_branch(rc, branch_id, text);
        }));
    }

    std::vector<detail::BranchResult> branches;
    for (auto& f : futures) branches.push_back(f.get());

    for (const detail::BranchResult& br : branches) {
        for (const detail::PendingStep& s : br.steps.steps)
            append(s.role, s.input_digest, s.output_text, s.tokens_in, s.tokens_out);
        for (const std::string& w : br.warnings) result.warnings.push_back(w);

        // Best-version retention: latest among the top-scoring versions, so
        // refinements that only match the best score still advance the text.
        const Hypothesis* best = nullptr;
        for (const Hypothesis& h : br.versions) {
            if (!h.scores) continue;
            if (!best || overall_score(*h.scores) >= overall_score(*best->scores)) best = &h;
        }
        if (!best) continue;
        if (overall_score(*best->scores) >= config.emit_floor) {
            RankedOutput out;
            out.hypothesis = *best;
            out.scores = *best->scores;
            out.evidence = br.evidence;
            out.status = br.status;
            result.outputs.push_back(std::move(out));
        } else {
            result.discarded.push_back(*best);
        }
    }

    std::sort(result.outputs.begin(), result.outputs.end(),
              [](const RankedOutput& a, const RankedOutput& b) {
                  int oa = overall_score(a.scores), ob = overall_score(b.scores);
                  if (oa != ob) return oa > ob;
                  if (a.hypothesis.generation != b.hypothesis.generation)
                      return a.hypothesis.generation < b.hypothesis.generation;
                  return a.hypothesis.id < b.hypothesis.id;
              });

    for (const StepRecord& s : services.trace->steps(result.run_id)) {
        result.tokens_in += s.tokens_in;
        result.tokens_out += s.tokens_out;
    }
    services.trace->close_run(result.run_id);
    return result;
}

// ---------------------------------------------------------------------------
// JSON serialization of run results.
// ---------------------------------------------------------------------------

inline nlohmann::json run_result_to_json(const RunResult& r) {
    auto hyp_json = [](const Hypothesis& h) {
        nlohmann::json j{{"id", h.id}, {"text", h.text}, {"generation", h.generation}};
        if (h.parent_id) j["parent_id"] = *h.parent_id;
        return j;
    };
    nlohmann::json outputs = nlohmann::json::array();
    for (const RankedOutput& o : r.outputs) {
        nlohmann::json evidence;
        std::vector<std::string> pmids;
        for (const LiteratureRecord& rec : o.evidence.literature) pmids.push_back(rec.pmid);
        evidence["pmids"] = pmids;
        if (o.evidence.subgraph_text) evidence["subgraph"] = *o.evidence.subgraph_text;
        if (o.evidence.background) evidence["background"] = *o.evidence.background;
        outputs.push_back({{"hypothesis", hyp_json(o.hypothesis)},
                           {"scores",
                            {{"novelty", o.scores.novelty},
                             {"relevance", o.scores.relevance},
                             {"significance", o.scores.significance},
                             {"verifiability", o.scores.verifiability},
                             {"overall", overall_score(o.scores)}}},
                           {"status", to_string(o.status)},
                           {"evidence", evidence}});
    }
    nlohmann::json discarded = nlohmann::json::array();
    for (const Hypothesis& h : r.discarded) discarded.push_back(hyp_json(h));
    nlohmann::json j{{"run_id", r.run_id},
                     {"outputs", outputs},
                     {"discarded", discarded},
                     {"trace_path", r.trace_path},
                     {"tokens_in", r.tokens_in},
                     {"tokens_out", r.tokens_out},
                     {"warnings", r.warnings}};
    if (r.plan_text) j["plan"] = *r.plan_text;
    return j;
}

}  // namespace hypoforge
