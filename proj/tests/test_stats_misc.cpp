#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include <hypoforge/embed.hpp>
#include <hypoforge/gateway.hpp>
#include <hypoforge/stats/bradley_terry.hpp>
#include <hypoforge/stats/classification.hpp>
#include <hypoforge/stats/similarity.hpp>
#include <hypoforge/stats/tournament.hpp>

using namespace hypoforge;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::Message;
using Catch::Matchers::WithinAbs;

namespace {

// Counts of 'a', 'b', 'c' — a three-axis embedding small enough to verify
// similarities by hand.
class LetterEmbedder : public Embedder {
  public:
    std::vector<double> embed(const std::string& text) const override {
        std::vector<double> v(3, 0.0);
        for (char c : text) {
            if (c == 'a') v[0] += 1;
            if (c == 'b') v[1] += 1;
            if (c == 'c') v[2] += 1;
        }
        return v;
    }
    int dimension() const override { return 3; }
};

std::map<std::string, std::map<std::string, std::string>> two_system_entries() {
    return {
        {"base", {{"t1", "base answer one"}, {"t2", "base answer two"}, {"t3", "base answer three"}}},
        {"ours", {{"t1", "our answer one"}, {"t2", "our answer two"}, {"t3", "our answer three"}}},
    };
}

const char* kAllFirstVerdict =
    "Novelty: A - sharper mechanism\n"
    "Relevance: A - on topic\n"
    "Significance: A - larger implication\n"
    "Verifiability: A - testable assay\n";

const char* kAllTieVerdict =
    "Novelty: 0 - comparable\n"
    "Relevance: 0 - comparable\n"
    "Significance: 0 - comparable\n"
    "Verifiability: 0 - comparable\n";

}  // namespace

TEST_CASE("cosine similarity handles the textbook cases and rejects bad input") {
    CHECK_THAT(cosine_similarity({1, 0}, {0, 1}), WithinAbs(0.0, 1e-15));
    CHECK_THAT(cosine_similarity({2, 3}, {2, 3}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(cosine_similarity({1, 1}, {-1, -1}), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(cosine_similarity({1, 1, 0}, {2, 1, 0}), WithinAbs(3.0 / std::sqrt(10.0), 1e-12));
    CHECK_THROWS_MATCHES(cosine_similarity({1, 2}, {1, 2, 3}), DomainError,
                         Message("vectors differ in dimension"));
    CHECK_THROWS_MATCHES(cosine_similarity({0, 0}, {1, 2}), DomainError,
                         Message("cosine undefined for a zero vector"));
}

TEST_CASE("temporal evaluation compares matched pairs against a cross-topic null") {
    LetterEmbedder embedder;
    std::vector<GoldHypothesis> gold = {
        {"aab", "bg1"},  // vector (2,1,0)
        {"bb", "bg1"},   // (0,2,0)
        {"ac", "bg2"},   // (1,0,1)
    };
    std::vector<std::string> generated = {"ab", "b"};
    auto eval = temporal_similarity_eval(generated, gold, {0, 1}, embedder);

    REQUIRE(eval.matched.size() == 2);
    CHECK_THAT(eval.matched[0], WithinAbs(3.0 / std::sqrt(10.0), 1e-12));  // (1,1,0) vs (2,1,0)
    CHECK_THAT(eval.matched[1], WithinAbs(1.0, 1e-12));                    // (0,1,0) vs (0,2,0)
    CHECK_THAT(eval.matched_median, WithinAbs((3.0 / std::sqrt(10.0) + 1.0) / 2.0, 1e-12));

    // Same-background gold pairs are excluded from the null.
    REQUIRE(eval.null_sims.size() == 2);
    CHECK_THAT(eval.null_sims[0], WithinAbs(2.0 / std::sqrt(10.0), 1e-12));  // (2,1,0) vs (1,0,1)
    CHECK_THAT(eval.null_sims[1], WithinAbs(0.0, 1e-12));                    // (0,2,0) vs (1,0,1)
    CHECK_THAT(eval.null_median, WithinAbs(1.0 / std::sqrt(10.0), 1e-12));

    SECTION("identical texts score a matched similarity of one") {
        HashedTokenEmbedder hashed(32);
        std::vector<GoldHypothesis> g = {{"GPR153 promotes neointima formation", "b1"}};
        auto self = temporal_similarity_eval({g[0].text}, g, {0}, hashed);
        REQUIRE(self.matched.size() == 1);
        CHECK_THAT(self.matched[0], WithinAbs(1.0, 1e-12));
        CHECK(self.null_sims.empty());
        CHECK(self.null_median == 0.0);
    }

    SECTION("degenerate inputs are rejected") {
        CHECK_THROWS_MATCHES(temporal_similarity_eval({"x"}, {}, {0}, embedder), InputError,
                             Message("no gold hypotheses"));
        CHECK_THROWS_MATCHES(temporal_similarity_eval({"x"}, gold, {0, 1}, embedder), InputError,
                             Message("pairing must cover every generated hypothesis"));
        CHECK_THROWS_MATCHES(temporal_similarity_eval({"x"}, gold, {3}, embedder), InputError,
                             Message("pairing index out of range"));
    }
}

TEST_CASE("similarity distributions serialize as a two-column CSV") {
    SimilarityEval eval;
    eval.matched = {0.5};
    eval.null_sims = {0.25, 1.0 / 3.0};
    std::ostringstream out;
    write_similarity_csv(eval, out);
    CHECK(out.str() ==
          "pair_type,similarity\n"
          "matched,0.500000\n"
          "null,0.250000\n"
          "null,0.333333\n");
}

TEST_CASE("classification metrics match a hand-counted confusion matrix") {
    const Relation P = Relation::Positive, N = Relation::Negative;
    // 3 true positives, 2 false positives, 1 false negative, 4 true negatives.
    std::vector<Relation> truth = {P, P, P, N, N, P, N, N, N, N};
    std::vector<Relation> predicted = {P, P, P, P, P, N, N, N, N, N};
    auto report = classification_metrics(predicted, truth);

    CHECK_THAT(report.accuracy, WithinAbs(0.7, 1e-12));
    const auto& pos = report.per_class.at("positive");
    CHECK_THAT(pos.precision, WithinAbs(0.6, 1e-12));
    CHECK_THAT(pos.recall, WithinAbs(0.75, 1e-12));
    CHECK_THAT(pos.f1, WithinAbs(2 * 0.6 * 0.75 / (0.6 + 0.75), 1e-12));
    CHECK(pos.support == 4);
    const auto& neg = report.per_class.at("negative");
    CHECK_THAT(neg.precision, WithinAbs(0.8, 1e-12));
    CHECK_THAT(neg.recall, WithinAbs(4.0 / 6.0, 1e-12));
    CHECK_THAT(neg.f1, WithinAbs(2 * 0.8 * (4.0 / 6.0) / (0.8 + 4.0 / 6.0), 1e-12));
    CHECK(neg.support == 6);
    CHECK_THAT(report.macro.precision, WithinAbs(0.7, 1e-12));
    CHECK_THAT(report.macro.recall, WithinAbs((0.75 + 4.0 / 6.0) / 2, 1e-12));
    CHECK_THAT(report.macro.f1, WithinAbs((pos.f1 + neg.f1) / 2, 1e-12));
    CHECK(report.macro.support == 10);

    SECTION("perfect and inverted predictions hit the extremes") {
        auto perfect = classification_metrics(truth, truth);
        CHECK(perfect.accuracy == 1.0);
        CHECK(perfect.per_class.at("positive").f1 == 1.0);
        CHECK(perfect.per_class.at("negative").f1 == 1.0);

        std::vector<Relation> flipped;
        for (Relation r : truth) flipped.push_back(r == P ? N : P);
        auto worst = classification_metrics(flipped, truth);
        CHECK(worst.accuracy == 0.0);
        CHECK(worst.per_class.at("positive").f1 == 0.0);
        CHECK(worst.per_class.at("negative").f1 == 0.0);
    }

    SECTION("an absent class scores zero instead of dividing by zero") {
        auto report_one = classification_metrics({P, P}, {P, P});
        const auto& missing = report_one.per_class.at("negative");
        CHECK(missing.precision == 0.0);
        CHECK(missing.recall == 0.0);
        CHECK(missing.f1 == 0.0);
        CHECK(missing.support == 0);
    }

    SECTION("shape errors are rejected") {
        CHECK_THROWS_MATCHES(classification_metrics({}, {}), InputError,
                             Message("no predictions"));
        CHECK_THROWS_MATCHES(classification_metrics({P}, {P, N}), InputError,
                             Message("predicted and true label lists differ in length"));
    }
}

TEST_CASE("relation classification routes a statement through the classifier prompt") {
    RuleBackend backend;
    backend.add_rule("relation classifier", "activates", "Relation: positive");
    backend.add_rule("relation classifier", "suppresses", "the effect would inhibit growth");

    auto up = classify_relation("GPR153 activates YAP1 signalling.", backend);
    CHECK(up.relation == Relation::Positive);
    CHECK(up.exchange.prompt.user_prompt == "Statement: GPR153 activates YAP1 signalling.");
    CHECK(up.exchange.response.text == "Relation: positive");

    // The alternate polarity vocabulary is accepted too.
    auto down = classify_relation("GPR153 suppresses SMC proliferation.", backend);
    CHECK(down.relation == Relation::Negative);
}

TEST_CASE("a pairwise tournament judges every pair on every topic") {
    RuleBackend judge;
    judge.add_rule("Compare two hypotheses", "", kAllFirstVerdict);

    auto result = run_pairwise_tournament(two_system_entries(), judge, 3);
    REQUIRE(result.records.size() == 12);  // 3 topics x 1 pair x 4 metrics
    REQUIRE(result.exchanges.size() == 3);
    CHECK(result.skipped.empty());

    for (size_t pairing = 0; pairing < 3; ++pairing) {
        for (int m = 0; m < kMetricCount; ++m) {
            const auto& r = result.records[pairing * 4 + m];
            CAPTURE(pairing, m);
            CHECK(r.metric == kAllMetrics[m]);
            CHECK(r.outcome == Outcome::FirstWins);
            bool ordered = (r.first == "base" && r.second == "ours") ||
                           (r.first == "ours" && r.second == "base");
            CHECK(ordered);
            CHECK(r.first == result.records[pairing * 4].first);
        }
        const auto& prompt = result.exchanges[pairing].prompt;
        CHECK_THAT(prompt.user_prompt, ContainsSubstring("H_A: "));
        CHECK_THAT(prompt.user_prompt, ContainsSubstring("H_B: "));
    }

    SECTION("the same seed replays the same presentation order") {
        auto again = run_pairwise_tournament(two_system_entries(), judge, 3);
        REQUIRE(again.records.size() == result.records.size());
        for (size_t i = 0; i < result.records.size(); ++i) {
            CHECK(again.records[i].first == result.records[i].first);
            CHECK(again.records[i].outcome == result.records[i].outcome);
        }
    }

    SECTION("some other seed flips at least one coin") {
        bool any_difference = false;
        for (unsigned seed = 4; seed < 40 && !any_difference; ++seed) {
            auto other = run_pairwise_tournament(two_system_entries(), judge, seed);
            for (size_t i = 0; i < result.records.size(); ++i)
                any_difference = any_difference || other.records[i].first != result.records[i].first;
        }
        CHECK(any_difference);
    }
}

TEST_CASE("an all-tie tournament feeds a flat ability fit") {
    RuleBackend judge;
    judge.add_rule("Compare two hypotheses", "", kAllTieVerdict);
    auto result = run_pairwise_tournament(two_system_entries(), judge, 9);
    REQUIRE(result.records.size() == 12);
    for (const auto& r : result.records) CHECK(r.outcome == Outcome::Tie);

    BTFit fit = fit_bradley_terry(result.records);
    REQUIRE_FALSE(fit.warnings.empty());
    CHECK(fit.warnings[0] == "no decisive outcomes; abilities driven to zero");
    CHECK_THAT(fit.beta_of("base"), WithinAbs(0.0, 1e-8));
    CHECK_THAT(fit.beta_of("ours"), WithinAbs(0.0, 1e-8));
}

TEST_CASE("judge failures skip the pairing and say which one") {
    RuleBackend judge;
    judge.add_rule("Compare two hypotheses", "answer two", "no verdict lines here");
    judge.add_rule("Compare two hypotheses", "", kAllFirstVerdict);

    auto result = run_pairwise_tournament(two_system_entries(), judge, 3);
    CHECK(result.records.size() == 8);  // t2 dropped, t1 and t3 judged
    REQUIRE(result.skipped.size() == 1);
    CHECK_THAT(result.skipped[0], ContainsSubstring("t2 / "));
    CHECK_THAT(result.skipped[0], ContainsSubstring("base"));
    CHECK_THAT(result.skipped[0], ContainsSubstring("ours"));
    CHECK_THAT(result.skipped[0],
               ContainsSubstring(": no A/B/0 verdict found for metric Novelty"));
}

TEST_CASE("tournament input validation names the offending system and topic") {
    RuleBackend judge;
    judge.add_rule("", "", kAllTieVerdict);
    CHECK_THROWS_MATCHES(run_pairwise_tournament({{"solo", {{"t", "x"}}}}, judge, 1), InputError,
                         Message("need at least two systems"));
    CHECK_THROWS_MATCHES(run_pairwise_tournament({{"a", {}}, {"b", {}}}, judge, 1), InputError,
                         Message("no topics"));
    std::map<std::string, std::map<std::string, std::string>> uneven = {
        {"a", {{"t1", "x"}, {"t2", "y"}}},
        {"b", {{"t1", "z"}}},
    };
    CHECK_THROWS_MATCHES(run_pairwise_tournament(uneven, judge, 1), InputError,
                         Message("system b has no hypothesis for topic: t2"));
}
