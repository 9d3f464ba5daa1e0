#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include <hypoforge/trace.hpp>

#include "support/test_util.hpp"

using namespace hypoforge;

namespace {

StepRecord make_step(const std::string& run, int index) {
    StepRecord s;
    s.run_id = run;
    s.step_index = index;
    s.agent_role = AgentRole::Critic;
    s.input_digest = "00ff00ff00ff00ff";
    s.output_text = "Overall Score: 17/20\nwith a \"quoted\" bit\nand a second line";
    s.tokens_in = 120;
    s.tokens_out = 45;
    s.timestamp = "2026-08-22T10:00:00Z";
    return s;
}

}  // namespace

TEST_CASE("step records round-trip through json") {
    StepRecord s = make_step("run-x", 3);
    CHECK(step_from_json(step_to_json(s)) == s);
    // Field names are part of the file format.
    auto j = step_to_json(s);
    CHECK(j.at("agent_role") == "Critic");
    CHECK(j.at("step_index") == 3);
    CHECK(j.at("tokens_in") == 120);
}

TEST_CASE("in-memory sink enforces append sequencing") {
    TraceSink sink;
    sink.open_run("r1");
    CHECK(sink.append(make_step("r1", 0)));
    CHECK(sink.append(make_step("r1", 1)));

    SECTION("replayed indices are dropped, not rewritten") {
        StepRecord replay = make_step("r1", 0);
        replay.output_text = "different";
        CHECK_FALSE(sink.append(replay));
        CHECK(sink.steps("r1").size() == 2);
        CHECK(sink.steps("r1")[0].output_text != "different");
    }

    SECTION("gaps are rejected with both indices in the message") {
        CHECK_THROWS_MATCHES(sink.append(make_step("r1", 5)), SequencingError,
                             Catch::Matchers::Message("step_index 5 skips ahead of 2 in run r1"));
    }

    SECTION("unknown runs cannot accept or report steps") {
        CHECK_THROWS_AS(sink.append(make_step("r2", 0)), StateError);
        CHECK_THROWS_AS(sink.steps("r2"), StateError);
        CHECK_THROWS_AS(sink.close_run("r2"), StateError);
    }

    SECTION("closing freezes the run") {
        sink.close_run("r1");
        CHECK_THROWS_AS(sink.append(make_step("r1", 2)), StateError);
        CHECK_THROWS_MATCHES(sink.open_run("r1"), StateError,
                             Catch::Matchers::Message("run already closed: r1"));
        CHECK(sink.steps("r1").size() == 2);  // reads still work
    }

    SECTION("re-opening a live run is a no-op") {
        sink.open_run("r1");
        CHECK(sink.append(make_step("r1", 2)));
    }
}

TEST_CASE("file-backed sink persists JSONL that loads back verbatim") {
    testutil::TempDir tmp;
    std::string path = tmp.sub("trace.jsonl");
    {
        TraceSink sink(path);
        sink.open_run("r1");
        sink.append(make_step("r1", 0));
        sink.append(make_step("r1", 1));
        sink.open_run("r2");
        sink.append(make_step("r2", 0));
        sink.close_run("r1");
    }
    auto records = load_trace(path);
    REQUIRE(records.size() == 3);
    CHECK(records[0] == make_step("r1", 0));
    CHECK(records[1] == make_step("r1", 1));
    CHECK(records[2] == make_step("r2", 0));

    SECTION("the constructor truncates an existing file") {
        TraceSink again(path);
        CHECK(load_trace(path).empty());
    }
}

TEST_CASE("trace loading reports the offending line") {
    testutil::TempDir tmp;
    std::string path = tmp.sub("broken.jsonl");
    {
        std::ofstream out(path);
        out << step_to_json(make_step("r", 0)).dump() << "\n";
        out << "{not json\n";
    }
    CHECK_THROWS_MATCHES(load_trace(path), ParseError,
                         Catch::Matchers::Message("trace line 2 is not valid JSON"));
    CHECK_THROWS_AS(load_trace(tmp.sub("missing.jsonl")), InputError);
    CHECK_THROWS_AS(TraceSink(tmp.sub("no-such-dir") + "/t.jsonl"), InputError);
}
