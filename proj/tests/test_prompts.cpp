#include <catch2/catch_amalgamated.hpp>

#include <hypoforge/prompts.hpp>

using namespace hypoforge;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::Message;

TEST_CASE("planner accepts keywords, background, or both") {
    PromptContext ctx;
    ctx.role = AgentRole::Planner;
    CHECK_THROWS_MATCHES(render_prompt(ctx), ContextError,
                         Message("Planner context missing required field: keywords or background"));

    ctx.keywords = {"GPR153", "vascular injury"};
    RenderedPrompt p = render_prompt(ctx);
    CHECK(p.system_prompt == kPlannerTemplate);
    CHECK(p.user_prompt == "Keywords: GPR153, vascular injury");

    ctx.background = "What is known so far.";
    p = render_prompt(ctx);
    CHECK(p.user_prompt ==
          "Keywords: GPR153, vascular injury\n\nBackground:\nWhat is known so far.");

    ctx.keywords.clear();
    CHECK(render_prompt(ctx).user_prompt == "Background:\nWhat is known so far.");
}

TEST_CASE("background writer needs the retrieved articles") {
    PromptContext ctx;
    ctx.role = AgentRole::Background;
    CHECK_THROWS_MATCHES(
        render_prompt(ctx), ContextError,
        Message("Background context missing required field: new_information"));
    ctx.new_information = "PMID: 1\nTitle: T";
    RenderedPrompt p = render_prompt(ctx);
    CHECK(p.system_prompt == kBackgroundTemplate);
    CHECK(p.user_prompt == "Articles:\nPMID: 1\nTitle: T");
    ctx.keywords = {"a", "b"};
    CHECK(render_prompt(ctx).user_prompt == "Keywords: a, b\n\nArticles:\nPMID: 1\nTitle: T");
}

TEST_CASE("explorer needs background and candidate nodes") {
    PromptContext ctx;
    ctx.role = AgentRole::Explorer;
    ctx.keywords = {"GPR153"};
    CHECK_THROWS_MATCHES(render_prompt(ctx), ContextError,
                         Message("Explorer context missing required field: background"));
    ctx.background = "bg";
    ctx.keywords.clear();
    CHECK_THROWS_MATCHES(
        render_prompt(ctx), ContextError,
        Message("Explorer context missing required field: keywords (candidate nodes)"));
    ctx.keywords = {"GPR153", "CEBPB"};
    RenderedPrompt p = render_prompt(ctx);
    CHECK(p.system_prompt == kExplorerTemplate);
    CHECK(p.user_prompt == "Background:\nbg\n\nCandidate nodes: GPR153, CEBPB");
}

TEST_CASE("scientist composes background and graph context") {
    PromptContext ctx;
    ctx.role = AgentRole::Scientist;
    ctx.background = "bg";
    CHECK_THROWS_MATCHES(render_prompt(ctx), ContextError,
                         Message("Scientist context missing required field: subgraph_text"));
    ctx.subgraph_text = "Nodes: GPR153 (gene/protein)";
    RenderedPrompt p = render_prompt(ctx);
    CHECK(p.system_prompt == kScientistTemplate);
    CHECK(p.user_prompt == "Background:\nbg\n\nKG context:\nNodes: GPR153 (gene/protein)");
    ctx.background.reset();
    CHECK_THROWS_AS(render_prompt(ctx), ContextError);
}

TEST_CASE("critic sees hypothesis, background, and optional references") {
    PromptContext ctx;
    ctx.role = AgentRole::Critic;
    ctx.background = "bg";
    CHECK_THROWS_MATCHES(render_prompt(ctx), ContextError,
                         Message("Critic context missing required field: hypothesis"));
    ctx.hypothesis = "H";
    RenderedPrompt p = render_prompt(ctx);
    CHECK(p.system_prompt == kCriticTemplate);
    CHECK(p.user_prompt == "Background:\nbg\n\nHypothesis: H");
    ctx.new_information = "PMID: 2";
    CHECK(render_prompt(ctx).user_prompt ==
          "Background:\nbg\n\nHypothesis: H\n\nReferences:\nPMID: 2");
}

TEST_CASE("reviewer orders critique before hypothesis before background") {
    PromptContext ctx;
    ctx.role = AgentRole::Reviewer;
    ctx.hypothesis = "H";
    ctx.background = "bg";
    CHECK_THROWS_MATCHES(render_prompt(ctx), ContextError,
                         Message("Reviewer context missing required field: critic_feedback"));
    ctx.critic_feedback = "too vague";
    RenderedPrompt p = render_prompt(ctx);
    CHECK(p.system_prompt == kReviewerTemplate);
    CHECK(p.user_prompt == "Critique:\ntoo vague\n\nHypothesis: H\n\nBackground:\nbg");
}

TEST_CASE("refiner needs the full revision bundle") {
    PromptContext ctx;
    ctx.role = AgentRole::Refiner;
    ctx.hypothesis = "H";
    ctx.critic_feedback = "C";
    CHECK_THROWS_MATCHES(render_prompt(ctx), ContextError,
                         Message("Refiner context missing required field: new_information"));
    ctx.new_information = "N";
    RenderedPrompt p = render_prompt(ctx);
    CHECK(p.system_prompt == kRefinerTemplate);
    CHECK(p.user_prompt == "Hypothesis: H\n\nCritic feedback:\nC\n\nNew information:\nN");
}

TEST_CASE("classifier wraps the statement") {
    PromptContext ctx;
    ctx.role = AgentRole::Classifier;
    CHECK_THROWS_MATCHES(
        render_prompt(ctx), ContextError,
        Message("Classifier context missing required field: hypothesis (statement)"));
    ctx.hypothesis = "GPR153 increases neointima formation";
    RenderedPrompt p = render_prompt(ctx);
    CHECK(p.system_prompt == kClassifierTemplate);
    CHECK(p.user_prompt == "Statement: GPR153 increases neointima formation");
}

TEST_CASE("judge renders direct and pairwise variants") {
    PromptContext ctx;
    ctx.role = AgentRole::Judge;
    CHECK_THROWS_MATCHES(render_prompt(ctx), ContextError,
                         Message("Judge context missing required field: background or keywords"));

    SECTION("direct mode requires a hypothesis") {
        ctx.background = "topic text";
        CHECK_THROWS_MATCHES(render_prompt(ctx), ContextError,
                             Message("Judge context missing required field: hypothesis or pair"));
        ctx.hypothesis = "H";
        RenderedPrompt p = render_prompt(ctx);
        CHECK(p.system_prompt == kDirectJudgeTemplate);
        // Single newlines: the judge lines sit adjacent.
        CHECK(p.user_prompt == "User Input: topic text\nHypothesis: H");
    }

    SECTION("keywords stand in when no background is present") {
        ctx.keywords = {"GPR153", "restenosis"};
        ctx.hypothesis = "H";
        CHECK(render_prompt(ctx).user_prompt == "User Input: GPR153, restenosis\nHypothesis: H");
    }

    SECTION("a pair switches to the head-to-head template") {
        ctx.background = "topic";
        ctx.pair = std::make_pair(std::string("first text"), std::string("second text"));
        RenderedPrompt p = render_prompt(ctx);
        CHECK(p.system_prompt == kPairwiseJudgeTemplate);
        CHECK(p.user_prompt == "User Input: topic\nH_A: first text\nH_B: second text");
    }
}

TEST_CASE("role templates carry their distinguishing instructions") {
    CHECK_THAT(role_template(AgentRole::Planner), ContainsSubstring("stepwise research workflow"));
    CHECK_THAT(role_template(AgentRole::Background),
               ContainsSubstring("less than 150 words"));
    CHECK_THAT(role_template(AgentRole::Explorer), ContainsSubstring("(5-10)"));
    CHECK_THAT(role_template(AgentRole::Scientist),
               ContainsSubstring("up to 3 concise, testable biomedical hypotheses"));
    CHECK_THAT(role_template(AgentRole::Critic), ContainsSubstring("Overall Score: <value>/20"));
    CHECK_THAT(role_template(AgentRole::Reviewer), ContainsSubstring("ACTIONS:"));
    CHECK_THAT(role_template(AgentRole::Refiner),
               ContainsSubstring("based on the provided critic feedback"));
    CHECK_THAT(role_template(AgentRole::Classifier), ContainsSubstring("Relation:"));
    CHECK_THAT(role_template(AgentRole::Judge, false),
               ContainsSubstring("senior biomedical reviewer"));
    CHECK_THAT(role_template(AgentRole::Judge, true), ContainsSubstring("H_A"));
    CHECK(role_template(AgentRole::Judge, true) != role_template(AgentRole::Judge, false));
}
