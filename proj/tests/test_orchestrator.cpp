#include <catch2/catch_amalgamated.hpp>

#include <hypoforge/case_study.hpp>
#include <hypoforge/orchestrator.hpp>
#include <hypoforge/parsers.hpp>

#include "support/test_util.hpp"

using namespace hypoforge;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::Message;

namespace {

MetricScores scores_of(int n, int r, int s, int v) {
    MetricScores m;
    m.novelty = n;
    m.relevance = r;
    m.significance = s;
    m.verifiability = v;
    return m;
}

// Full offline wiring for the bundled replay session.
struct ReplayRig {
    std::unique_ptr<RuleBackend> backend = case_study::make_backend();
    TraceSink trace;  // in-memory
    GraphStore graph = case_study::graph();
    CorpusSearchClient corpus = case_study::corpus_client();
    HashedTokenEmbedder embedder;

    Services services() {
        Services s;
        s.backend = backend.get();
        s.trace = &trace;
        s.graph = &graph;
        s.literature = &corpus;
        s.embedder = &embedder;
        return s;
    }
};

std::vector<int> critic_overalls(const TraceSink& trace, const std::string& run_id) {
    std::vector<int> out;
    for (const StepRecord& s : trace.steps(run_id))
        if (s.agent_role == AgentRole::Critic) out.push_back(parse_critic(s.output_text).stated_overall);
    return out;
}

}  // namespace

TEST_CASE("topic keywords drop stop words and dedupe case-insensitively") {
    CHECK(derive_keywords(case_study::kTopic) ==
          std::vector<std::string>{"GPR153", "vascular", "injury", "disease"});
    CHECK(derive_keywords("Role of ROLE role") == std::vector<std::string>{});
    CHECK(derive_keywords("YAP/TAZ and TAZ-YAP signalling") ==
          std::vector<std::string>{"YAP", "TAZ", "TAZ-YAP", "signalling"});
    CHECK(derive_keywords("Alpha alpha ALPHA beta") ==
          std::vector<std::string>{"Alpha", "beta"});
    CHECK(derive_keywords("") == std::vector<std::string>{});
    CHECK(derive_keywords("GSK3_B x") == std::vector<std::string>{"GSK3_B", "x"});
}

TEST_CASE("the decision rule orders accept, refine, exhaust, discard") {
    PipelineConfig cfg;
    cfg.max_cycles = 3;
    cfg.accept_threshold = 18;
    cfg.emit_floor = 15;

    CHECK(decide(scores_of(5, 5, 4, 4), 0, cfg) == Decision::Accept);   // 18 meets the threshold
    CHECK(decide(scores_of(5, 5, 5, 5), 3, cfg) == Decision::Accept);   // accept beats exhaust
    CHECK(decide(scores_of(4, 5, 4, 4), 0, cfg) == Decision::Refine);   // 17, cycles remain
    CHECK(decide(scores_of(4, 5, 4, 4), 2, cfg) == Decision::Refine);
    CHECK(decide(scores_of(4, 5, 4, 4), 3, cfg) == Decision::Exhaust);  // 17 >= floor
    CHECK(decide(scores_of(4, 4, 4, 3), 3, cfg) == Decision::Exhaust);  // 15 == floor
    CHECK(decide(scores_of(4, 4, 3, 3), 3, cfg) == Decision::Discard);  // 14 < floor
    CHECK(decide(scores_of(1, 1, 1, 1), 2, cfg) == Decision::Refine);   // low but cycles remain

    CHECK(std::string(to_string(Decision::Accept)) == "Accept");
    CHECK(std::string(to_string(BranchStatus::Exhausted)) == "Exhausted");
    CHECK(std::string(to_string(BranchStatus::Active)) == "Active");
}

TEST_CASE("service wiring is validated pointer by pointer") {
    Services s;
    CHECK_THROWS_MATCHES(s.validate(), InputError, Message("services: chat backend not wired"));
    RuleBackend backend;
    s.backend = &backend;
    CHECK_THROWS_MATCHES(s.validate(), InputError, Message("services: trace sink not wired"));
    TraceSink trace;
    s.trace = &trace;
    CHECK_THROWS_MATCHES(s.validate(), InputError, Message("services: graph store not wired"));
    GraphStore graph;
    s.graph = &graph;
    CHECK_THROWS_MATCHES(s.validate(), InputError,
                         Message("services: literature client not wired"));
    CorpusSearchClient corpus;
    s.literature = &corpus;
    CHECK_THROWS_MATCHES(s.validate(), InputError, Message("services: embedder not wired"));
    HashedTokenEmbedder embedder;
    s.embedder = &embedder;
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("run ids derive from every run-defining input") {
    PipelineConfig cfg = case_study::replay_config();
    std::string base = derive_run_id(case_study::kTopic, cfg);
    CHECK(base.starts_with("run-"));
    CHECK(base == derive_run_id(case_study::kTopic, cfg));

    CHECK(derive_run_id("another topic", cfg) != base);
    PipelineConfig alt = cfg;
    alt.seed = cfg.seed + 1;
    CHECK(derive_run_id(case_study::kTopic, alt) != base);
    alt = cfg;
    alt.max_cycles = cfg.max_cycles + 1;
    CHECK(derive_run_id(case_study::kTopic, alt) != base);
    alt = cfg;
    alt.accept_threshold = 19;
    CHECK(derive_run_id(case_study::kTopic, alt) != base);
    alt = cfg;
    alt.emit_floor = cfg.emit_floor + 1;
    CHECK(derive_run_id(case_study::kTopic, alt) != base);
    alt = cfg;
    alt.temporal_cutoff.reset();
    CHECK(derive_run_id(case_study::kTopic, alt) != base);

    // Fields outside the id key (temperature etc.) do not change it.
    alt = cfg;
    alt.temperature = 0.9;
    CHECK(derive_run_id(case_study::kTopic, alt) == base);
}

TEST_CASE("degenerate pipeline inputs fail fast") {
    ReplayRig rig;
    PipelineConfig cfg = case_study::replay_config();
    cfg.emit_plan = false;
    CHECK_THROWS_MATCHES(run_pipeline("  ", cfg, rig.services()), InputError,
                         Message("topic empty"));
    CHECK_THROWS_MATCHES(run_pipeline("of the in and", cfg, rig.services()), InputError,
                         Message("no usable keywords derived from topic"));
    CHECK_THROWS_MATCHES(run_pipeline("topic", cfg, Services{}), InputError,
                         Message("services: chat backend not wired"));
}

TEST_CASE("the bundled session replays the full refinement trajectory") {
    ReplayRig rig;
    RunResult result = run_pipeline(case_study::kTopic, case_study::replay_config(),
                                    rig.services());

    CHECK(result.run_id == derive_run_id(case_study::kTopic, case_study::replay_config()));
    REQUIRE(result.outputs.size() == 1);
    CHECK(result.discarded.empty());

    const RankedOutput& top = result.outputs[0];
    CHECK(top.status == BranchStatus::Exhausted);
    CHECK(top.hypothesis.id == "b1-g3");
    CHECK(top.hypothesis.generation == 3);
    CHECK(top.hypothesis.parent_id == "b1-g2");
    CHECK(top.hypothesis.text == case_study::kFinalHypothesis);
    CHECK(top.scores == scores_of(5, 5, 5, 4));
    CHECK(overall_score(top.scores) == 19);

    // The branch never exceeded the cycle budget.
    CHECK(top.hypothesis.generation <= case_study::replay_config().max_cycles);

    // Critic verdicts improve 17 -> 19 and then plateau.
    CHECK(critic_overalls(rig.trace, result.run_id) == std::vector<int>{17, 19, 19, 19});

    // Evidence bundle is fully populated and carries no post-cutoff record.
    CHECK(top.evidence.background.has_value());
    CHECK(top.evidence.subgraph_text.has_value());
    CHECK_FALSE(top.evidence.literature.empty());
    for (const LiteratureRecord& r : top.evidence.literature) {
        CHECK(r.pmid != case_study::kPostCutoffPmid);
        CHECK(!(case_study::cutoff() < r.pub_date));
    }

    // Token totals equal the sum over trace steps.
    long tin = 0, tout = 0;
    for (const StepRecord& s : rig.trace.steps(result.run_id)) {
        tin += s.tokens_in;
        tout += s.tokens_out;
    }
    CHECK(result.tokens_in == tin);
    CHECK(result.tokens_out == tout);
    CHECK(result.tokens_in > 0);
    CHECK(result.plan_text.has_value());
}

TEST_CASE("a lower acceptance bar stops at the first strong revision") {
    ReplayRig rig;
    PipelineConfig cfg = case_study::replay_config();
    cfg.accept_threshold = 18;
    RunResult result = run_pipeline(case_study::kTopic, cfg, rig.services());

    REQUIRE(result.outputs.size() == 1);
    const RankedOutput& top = result.outputs[0];
    CHECK(top.status == BranchStatus::Accepted);
    CHECK(top.hypothesis.generation == 1);
    CHECK(top.hypothesis.text == case_study::kHypothesisV1);
    CHECK(overall_score(top.scores) == 19);
    CHECK(critic_overalls(rig.trace, result.run_id) == std::vector<int>{17, 19});
}

TEST_CASE("a floor above every verdict discards the branch") {
    ReplayRig rig;
    PipelineConfig cfg = case_study::replay_config();
    cfg.accept_threshold = 20;
    cfg.emit_floor = 20;
    RunResult result = run_pipeline(case_study::kTopic, cfg, rig.services());

    CHECK(result.outputs.empty());
    REQUIRE(result.discarded.size() == 1);
    CHECK(result.discarded[0].id == "b1-g3");
    CHECK(result.discarded[0].text == case_study::kFinalHypothesis);
}

TEST_CASE("two scripted runs are identical apart from timestamps") {
    ReplayRig first;
    RunResult a = run_pipeline(case_study::kTopic, case_study::replay_config(),
                               first.services());
    ReplayRig second;
    RunResult b = run_pipeline(case_study::kTopic, case_study::replay_config(),
                               second.services());

    CHECK(run_result_to_json(a) == run_result_to_json(b));

    auto sa = first.trace.steps(a.run_id);
    auto sb = second.trace.steps(b.run_id);
    REQUIRE(sa.size() == sb.size());
    for (size_t i = 0; i < sa.size(); ++i) {
        CAPTURE(i);
        CHECK(sa[i].run_id == sb[i].run_id);
        CHECK(sa[i].step_index == sb[i].step_index);
        CHECK(sa[i].agent_role == sb[i].agent_role);
        CHECK(sa[i].input_digest == sb[i].input_digest);
        CHECK(sa[i].output_text == sb[i].output_text);
        CHECK(sa[i].tokens_in == sb[i].tokens_in);
        CHECK(sa[i].tokens_out == sb[i].tokens_out);
    }
}

TEST_CASE("an exhausted token budget stops branches with a warning") {
    ReplayRig rig;
    PipelineConfig cfg = case_study::replay_config();
    cfg.token_limit = 1;  // burned before any branch starts
    RunResult result = run_pipeline(case_study::kTopic, cfg, rig.services());

    CHECK(result.outputs.empty());
    CHECK(result.discarded.empty());
    bool saw = false;
    for (const std::string& w : result.warnings)
        if (w == "token budget exhausted; branch b1 stopped early") saw = true;
    CHECK(saw);
}

TEST_CASE("run results serialize with scores, status, and evidence") {
    ReplayRig rig;
    RunResult result = run_pipeline(case_study::kTopic, case_study::replay_config(),
                                    rig.services());
    nlohmann::json j = run_result_to_json(result);

    CHECK(j["run_id"] == result.run_id);
    CHECK(j["tokens_in"] == result.tokens_in);
    CHECK(j["discarded"].is_array());
    CHECK(j["warnings"].is_array());
    CHECK(j.contains("plan"));
    REQUIRE(j["outputs"].size() == 1);
    const auto& out = j["outputs"][0];
    CHECK(out["status"] == "Exhausted");
    CHECK(out["hypothesis"]["id"] == "b1-g3");
    CHECK(out["hypothesis"]["parent_id"] == "b1-g2");
    CHECK(out["hypothesis"]["generation"] == 3);
    CHECK(out["scores"]["novelty"] == 5);
    CHECK(out["scores"]["verifiability"] == 4);
    CHECK(out["scores"]["overall"] == 19);
    CHECK(out["evidence"]["pmids"].is_array());
    CHECK(out["evidence"].contains("subgraph"));
    CHECK(out["evidence"].contains("background"));
    for (const auto& pmid : out["evidence"]["pmids"])
        CHECK(pmid.get<std::string>() != case_study::kPostCutoffPmid);
}
