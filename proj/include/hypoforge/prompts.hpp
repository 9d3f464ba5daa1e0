#pragma once
// Role prompt templates and deterministic prompt rendering. Each agent call
// is a (system, user) pair: the system prompt carries the fixed role
// instructions, the user prompt carries labelled context blocks. Rendering is
// pure - identical context yields identical bytes - so scripted backends can
// key replies off a digest of the rendered pair.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "text.hpp"

namespace hypoforge {

// ---------------------------------------------------------------------------
// Templates. These are the fixed instruction texts, one per role.
// ---------------------------------------------------------------------------

inline constexpr const char* kPlannerTemplate =
    R"(Develop a clear, stepwise research workflow based on the provided background text.
Your plan should outline:
1. Domain selection;
2. Knowledge graph retrieval steps;
3. Hypothesis generation;
4. Iterative refinement using literature and graph evidence;
5. Final decision-making.
Respond with numbered steps.)";

inline constexpr const char* kBackgroundTemplate =
    R"(You are given a list of PubMed article metadata blocks about a specific disease and a set of core genes or biological entities. Write a concise, well-structured background paragraph (less than 150 words) that summarizes key mechanistic insights and highlights the relationships between the core genes and disease-relevant biological processes (such as EMT, inflammation, senescence, signaling, etc.).
Requirements:
1. Clearly explain how the core genes are linked to disease mechanisms, pathways, or phenotypes based on the literature.
2. Emphasize causal or regulatory connections when possible, rather than just listing associations.
3. Do not copy sentences verbatim from abstracts. Always synthesize and paraphrase information in your own words.
4. Use clear, logical, and scientifically precise language.
5. Avoid including superfluous or generic information; focus on mechanistic insights most relevant to the disease and core genes.)";

inline constexpr const char* kExplorerTemplate =
    R"(Given a background text and a list of candidate KG node, Based on the background information, select the most relevant nodes (5-10) to use for subgraph construction.
1. Only choose from the provided candidates.
2. Output only a JSON array of the selected.
3. Do not output any extra text, explanations, or formatting.)";

inline constexpr const char* kScientistTemplate =
    R"(Generate up to 3 concise, testable biomedical hypotheses. Each hypothesis must be grounded in both the background and KG context, but extend current knowledge with a novel mechanistic, causal, regulatory, or predictive insight.
Guidelines:
1. Integrate both background and KG context.
2. Propose new biological mechanisms or interactions, not summaries or rephrasings of input.
3. Use precise scientific language, including mechanistic verbs such as: activates, inhibits, modulates, represses, etc.
4. Each hypothesis must be a single, plausible, testable sentence (<= 30 words) with clear entities and measurable outcomes.
5. Output only the hypotheses, no numbering, bullets, explanations, citations, or evidence fields.
Examples (good):
Activation of TGF-β in smooth muscle cells promotes vascular remodeling in hypertension.
Loss of gene X enhances inflammatory response to toxin Y in liver tissue.
Examples (bad, avoid):
CVD is associated with Wnt signaling and fibrosis.
Output:
Each line should be a standalone hypothesis. Return exactly one hypothesis per line, and nothing else.)";

inline constexpr const char* kCriticTemplate =
    R"(Assess the hypothesis using four metrics:
Novelty: Does it introduce ideas not present in the background?
Relevance: How well does it align with the background and supporting evidence?
Significance: What is its potential to advance biological understanding or clinical practice?
Verifiability: Can it be reliably tested with current scientific methods?
Rate each metric on a 0-5 scale:
0 = no merit, 1 = very slight, 2 = slight, 3 = moderate, 4 = strong, 5 = exceptional.
Be conservative: award a 5 only if the hypothesis fully meets the criterion with no reservations. Provide one sentence of rationale per metric.
Output:
<Metric>: Score <X>
<One-sentence rationale>
(repeat for all 4 metrics)
At the end, write on a separate line:
Overall Score: <value>/20)";

inline constexpr const char* kReviewerTemplate =
    R"(Given the CriticAgent's markdown critique (scores 0-5 with rationales), the current hypothesis, and background text, recommend follow-up actions and query adjustments.
Steps:
1. Identify all metrics scoring <= 3. If none, select a 4-point metric using this priority: Novelty > Significance > Relevance > Verifiability.
2. Recommend all relevant actions from ['neo4j', 'pubmed', 'background']:
   - For low novelty or mechanistic gaps: use 'neo4j'; add 'pubmed' if literature may help.
   - For low verifiability: use 'pubmed'; add 'neo4j' if KG includes measurable pathways.
   - For low relevance: use 'background'.
   - If multiple metrics are low, recommend all relevant actions
3. Output exactly 3 lines:
    ACTIONS:action1,action2
    DEPTH_OVERRIDE:<integer>
    RELS_OVERRIDE:rel1,rel2,...
Rules:
Always recommend at least one action.
Include all actions relevant to low-scoring metrics.
Output must strictly follow the format above with no extra explanation.
Example:
If Novelty=2 and Verifiability=3
ACTIONS:neo4j,pubmed)";

inline constexpr const char* kRefinerTemplate =
    R"(Improve the current hypothesis based on the provided critic feedback, and new information (from Neo4j, PubMed, or background). Only make content-level changes that directly address the weaknesses.

Rules:
1. For each identified weakness, briefly state what is missing or imprecise in the hypothesis (one sentence per metric).
2. Review all new information:
    If high-quality, relevant content addresses a weakness, explain how it helps and revise the hypothesis accordingly.
    If no new information directly addresses the weaknesses, use relevant new information and scientific reasoning and the provided background to make a real, meaningful improvement, but only if this improvement is justified by the context.
    If nothing useful is found, or only stylistic edits are possible, clearly state this and leave the hypothesis unchanged.
3. Do not rephrase or reword unless it results in a real improvement. Do not invent content unsupported by evidence.

Example 1 (with helpful new info):
Step 1: The hypothesis lacks a mechanism linking Wnt inhibition to reduced fibrosis.
Step 2: New PubMed evidence suggests TGF-β mediates this process.
Step 3: Adding TGF-β clarifies the pathway.
Inhibition of Wnt signaling reduces cardiac fibrosis via downregulation of TGF-β activity.
Example 2 (no helpful info):
Step 1: The hypothesis lacks a mechanistic link.
Step 2: No new information improves this.
Step 3: No justified revision possible.
Overexpression of SOD2 reduces neurodegeneration by mitigating oxidative stress in dopaminergic neurons.
Output:
    1-4 short reasoning steps (one per line)
    Final refined hypothesis as the last line (no numbering, no extra text)
Instructions:
    Use only provided context (background + new info).
    Each reasoning step must be a complete, self-contained sentence.
    Do not include explanations, citations, or bullet points.)";

// The two judge variants substitute their inputs inline at the tail of the
// template, so the fixed head is the system prompt and the tail becomes the
// user prompt.

inline constexpr const char* kDirectJudgeTemplate =
    R"(You are a senior biomedical reviewer.

Task:
Evaluate the following hypothesis by assigning a score for each metric (Novelty, Relevance, Significance, Verifiability) and providing a concise reason.
Metric definitions:
Novelty: Evaluate the novelty of the generated scientific hypothesis. The score range should be 0 to 3. 0 means there's no novelty, which indicates that the hypothesis is a paraphrase of the input. 1 means there's slight novelty. 2 means there's moderate novelty. 3 means the hypothesis has strong novelty, which gives new insights beyond the background. Output is an integer.
Relevance: Evaluate the relevance of the generated scientific hypothesis. The score range should be 0 to 3. 0 means there's no relevance. 1 means there's slight relevance. 2 means there's moderate relevance. 3 means they are strongly related. Output is an integer.
Significance: Evaluate the significance of the generated scientific hypothesis. The score range should be 0 to 3. 0 means there's no significance, which indicates that the hypothesis is just a common knowledge. 1 means there's slight significance. 2 means there's moderate significance. 3 means the hypothesis has strong significance, which gives significant insights beyond the background. Output is an integer.
Verifiability: Evaluate the verifiability of the generated scientific hypothesis. The score range should be 0 to 3. 0 means there's no verifiability, which indicates that the hypothesis is not possible to be verified in future work. 1 means there's slight verifiability. 2 means there's moderate verifiability. 3 means the hypothesis has strong verifiability, which means the hypothesis is very likely to be verified in future work. Output is an integer.)";

inline constexpr const char* kPairwiseJudgeTemplate =
    R"(You are a senior biomedical reviewer. Compare two hypotheses A and B on four metrics: Novelty, Relevance, Significance, Verifiability.
Instructions:
For each metric, judge and select a winner:
    - "A" if A is clearly superior,
    - "B" if B is clearly superior,
    - "0" if they are equal or difference is unclear.
For each, give a concise reason.
Each metric is judged strictly independently.
Novelty: Evaluate the novelty of two scientific hypotheses (A and B) given the user input. For each, assign a novelty score from 0 to 3. 0 means there's no novelty, which indicates that the hypothesis is a paraphrase of the background. 1 means there's slight novelty. 2 means there's moderate novelty. 3 means the hypothesis has strong novelty, which gives new insights beyond the background. Score two hypotheses and compare which one is more novel("A", "B", or "0" if equal or difference is unclear)
Relevance: Evaluate the relevance of two scientific hypotheses (A and B) given the user input. For each, assign a relevance score from 0 to 3. 0 means there's no relevance. 1 means there's slight relevance. 2 means there's moderate relevance. 3 means the hypothesis is strongly related to the background. Score both hypotheses and compare which one is more relevant ("A", "B", or "0" if equal or difference is unclear)
Significance: Evaluate the significance of two scientific hypotheses (H_A and H_B) given the user input. For each, assign a significance score from 0 to 3. 0 means there's no significance, which indicates that the hypothesis is just common knowledge. 1 means there's slight significance. 2 means there's moderate significance. 3 means the hypothesis has strong significance, providing significant insights beyond the background. Score both hypotheses and compare which one is more significant ("A", "B", or "0" if equal or difference is unclear)
Verifiability: Evaluate the verifiability of two scientific hypotheses (H_A and H_B) given the user input. For each, assign a verifiability score from 0 to 3. 0 means there's no verifiability, which indicates that the hypothesis is not possible to be verified in future work. 1 means there's slight verifiability. 2 means there's moderate verifiability. 3 means the hypothesis has strong verifiability, which means it is very likely to be verified in future work. Score both hypotheses and compare which one is more verifiable ("A", "B", or "0" if equal or difference is unclear))";

inline constexpr const char* kClassifierTemplate =
    R"(You are a biomedical relation classifier. You are given a statement describing an association between two biomedical entities. Decide whether the described regulatory effect is positive (activating, stimulating, up-regulating) or negative (inhibiting, suppressing, down-regulating).
Output exactly one line, nothing else:
Relation: positive
or
Relation: negative)";

// Turns a research task into PubMed-style search strategies. The reply must
// be strict JSON so it can be machine-consumed without heuristics.
inline constexpr const char* kQueryPlannerTemplate =
    R"(You are a biomedical literature search strategist. Given a research task, produce a PubMed search strategy as strict JSON.
Schema:
{"groups": [{"terms": ["term", ...], "field": "MESH" | "TIAB" | "ANY"}, ...], "retmax": <integer>}
Rules:
1. Each group is a set of synonyms combined with OR; groups are combined with AND.
2. Use "MESH" for controlled vocabulary concepts, "TIAB" for title/abstract phrases, "ANY" for unrestricted terms.
3. 2-4 groups; keep terms short and specific.
4. Output only the JSON object. Do not output any extra text, explanations, or formatting.)";

inline const char* role_template(AgentRole role, bool pairwise = false) {
    switch (role) {
        case AgentRole::Planner: return kPlannerTemplate;
        case AgentRole::Background: return kBackgroundTemplate;
        case AgentRole::Explorer: return kExplorerTemplate;
        case AgentRole::Scientist: return kScientistTemplate;
        case AgentRole::Critic: return kCriticTemplate;
        case AgentRole::Reviewer: return kReviewerTemplate;
        case AgentRole::Refiner: return kRefinerTemplate;
        case AgentRole::Classifier: return kClassifierTemplate;
        case AgentRole::Judge: return pairwise ? kPairwiseJudgeTemplate : kDirectJudgeTemplate;
    }
    return "";
}

// ---------------------------------------------------------------------------
// Context and rendering.
// ---------------------------------------------------------------------------

struct PromptContext {
    AgentRole role = AgentRole::Planner;
    std::vector<std::string> keywords;  // user topic terms, or Explorer candidates
    std::optional<std::string> background;
    std::optional<std::string> subgraph_text;
    std::optional<std::string> hypothesis;
    std::optional<std::string> critic_feedback;
    std::optional<std::string> new_information;  // retrieved articles / refinement evidence
    std::optional<std::pair<std::string, std::string>> pair;  // (hypothesis_a, hypothesis_b)
};

struct RenderedPrompt {
    std::string system_prompt;
    std::string user_prompt;

    bool operator==(const RenderedPrompt&) const = default;
};

namespace detail {

inline void require(bool ok, const char* role, const char* field) {
    if (!ok)
        throw ContextError(std::string(role) + " context missing required field: " + field);
}

inline std::string block(const std::string& label, const std::string& body) {
    return label + ":\n" + body;
}

}  // namespace detail

// Builds the (system, user) pair for one agent call. The system prompt is the
// role's fixed template; the user prompt is the context assembled into
// labelled blocks separated by blank lines. Throws ContextError when a field
// the role depends on is absent.
inline RenderedPrompt render_prompt(const PromptContext& ctx) {
    using detail::block;
    using detail::require;
    std::vector<std::string> blocks;
    bool pairwise = false;

    switch (ctx.role) {
        case AgentRole::Planner:
            require(!ctx.keywords.empty() || ctx.background.has_value(), "Planner",
                    "keywords or background");
            if (!ctx.keywords.empty()) blocks.push_back("Keywords: " + join(ctx.keywords, ", "));
            if (ctx.background) blocks.push_back(block("Background", *ctx.background));
            break;

        case AgentRole::Background:
            require(ctx.new_information.has_value(), "Background", "new_information");
            if (!ctx.keywords.empty()) blocks.push_back("Keywords: " + join(ctx.keywords, ", "));
            blocks.push_back(block("Articles", *ctx.new_information));
            break;

        case AgentRole::Explorer:
            require(ctx.background.has_value(), "Explorer", "background");
            require(!ctx.keywords.empty(), "Explorer", "keywords (candidate nodes)");
            blocks.push_back(block("Background", *ctx.background));
            blocks.push_back("Candidate nodes: " + join(ctx.keywords, ", "));
            break;

        case AgentRole::Scientist:
            require(ctx.background.has_value(), "Scientist", "background");
            require(ctx.subgraph_text.has_value(), "Scientist", "subgraph_text");
            blocks.push_back(block("Background", *ctx.background));
            blocks.push_back(block("KG context", *ctx.subgraph_text));
            break;

        case AgentRole::Critic:
            require(ctx.hypothesis.has_value(), "Critic", "hypothesis");
            require(ctx.background.has_value(), "Critic", "background");
            blocks.push_back(block("Background", *ctx.background));
            blocks.push_back("Hypothesis: " + *ctx.hypothesis);
            if (ctx.new_information) blocks.push_back(block("References", *ctx.new_information));
            break;

        case AgentRole::Reviewer:
            require(ctx.critic_feedback.has_value(), "Reviewer", "critic_feedback");
            require(ctx.hypothesis.has_value(), "Reviewer", "hypothesis");
            require(ctx.background.has_value(), "Reviewer", "background");
            blocks.push_back(block("Critique", *ctx.critic_feedback));
            blocks.push_back("Hypothesis: " + *ctx.hypothesis);
            blocks.push_back(block("Background", *ctx.background));
            break;

        case AgentRole::Refiner:
            require(ctx.hypothesis.has_value(), "Refiner", "hypothesis");
            require(ctx.critic_feedback.has_value(), "Refiner", "critic_feedback");
            require(ctx.new_information.has_value(), "Refiner", "new_information");
            blocks.push_back("Hypothesis: " + *ctx.hypothesis);
            blocks.push_back(block("Critic feedback", *ctx.critic_feedback));
            blocks.push_back(block("New information", *ctx.new_information));
            break;

        case AgentRole::Classifier:
            require(ctx.hypothesis.has_value(), "Classifier", "hypothesis (statement)");
            blocks.push_back("Statement: " + *ctx.hypothesis);
            break;

        case AgentRole::Judge: {
            std::string user_input = ctx.background
                                         ? *ctx.background
                                         : join(ctx.keywords, ", ");
            require(!user_input.empty(), "Judge", "background or keywords");
            if (ctx.pair) {
                pairwise = true;
                blocks.push_back("User Input: " + user_input);
                blocks.push_back("H_A: " + ctx.pair->first);
                blocks.push_back("H_B: " + ctx.pair->second);
            } else {
                require(ctx.hypothesis.has_value(), "Judge", "hypothesis or pair");
                blocks.push_back("User Input: " + user_input);
                blocks.push_back("Hypothesis: " + *ctx.hypothesis);
            }
            break;
        }
    }

    RenderedPrompt out;
    out.system_prompt = role_template(ctx.role, pairwise);
    // The judge tail lines are adjacent in the source template, so keep them
    // adjacent in the rendered user prompt too.
    out.user_prompt = join(blocks, ctx.role == AgentRole::Judge ? "\n" : "\n\n");
    return out;
}

}  // namespace hypoforge
