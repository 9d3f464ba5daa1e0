#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include <hypoforge/stats/rasch.hpp>

#include "support/oracles.hpp"

using namespace hypoforge;
using Catch::Matchers::Message;
using Catch::Matchers::WithinAbs;

namespace {

const char* kRatedMetrics[4] = {"novelty", "relevance", "significance", "verifiability"};

// Three raters x two hypotheses x four metrics, every category 1..5 used.
RaschData panel_data() {
    RaschData data;
    data.K = 5;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j)
            for (int m = 0; m < 4; ++m)
                data.ratings.push_back({"r" + std::to_string(i + 1), "h" + std::to_string(j + 1),
                                        kRatedMetrics[m], 1 + (i + 2 * j + m) % 5});
    return data;
}

RaschData single_rater_data() {
    RaschData data;
    data.K = 5;
    const int scores[3][4] = {{5, 4, 4, 4}, {2, 3, 1, 2}, {3, 5, 2, 1}};
    for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 4; ++m)
            data.ratings.push_back({"judge", "h" + std::to_string(j + 1), kRatedMetrics[m],
                                    scores[j][m]});
    return data;
}

void check_tau_ordered(const std::vector<double>& tau) {
    for (size_t k = 1; k < tau.size(); ++k) {
        CAPTURE(k);
        CHECK(tau[k] > tau[k - 1]);
    }
}

}  // namespace

TEST_CASE("rating data validation catches empty, narrow, and out-of-range input") {
    RaschData empty;
    CHECK_THROWS_MATCHES(empty.validate(), InputError, Message("no ratings"));
    RaschData narrow;
    narrow.ratings.push_back({"r", "h", "novelty", 1});
    narrow.K = 1;
    CHECK_THROWS_MATCHES(narrow.validate(), InputError,
                         Message("need at least two rating categories"));
    RaschData wide;
    wide.K = 5;
    wide.ratings.push_back({"r", "h", "novelty", 6});
    CHECK_THROWS_MATCHES(wide.validate(), RangeError, Message("rating outside 1..5: 6"));
}

TEST_CASE("ratings CSV round-trips and infers the category count") {
    RaschData data = panel_data();
    std::ostringstream out;
    write_ratings_csv(data, out);
    CHECK(out.str().starts_with("rater,hypothesis,metric,rating\n"));

    std::istringstream in(out.str());
    RaschData back = read_ratings_csv(in);
    REQUIRE(back.ratings.size() == data.ratings.size());
    CHECK(back.K == 5);  // inferred: the largest observed value
    for (size_t i = 0; i < data.ratings.size(); ++i) {
        CHECK(back.ratings[i].rater == data.ratings[i].rater);
        CHECK(back.ratings[i].hypothesis == data.ratings[i].hypothesis);
        CHECK(back.ratings[i].metric == data.ratings[i].metric);
        CHECK(back.ratings[i].value == data.ratings[i].value);
    }

    SECTION("inference floors at two categories and an explicit K wins") {
        std::istringstream ones("r,h,novelty,1\n");
        CHECK(read_ratings_csv(ones).K == 2);
        std::istringstream again("r,h,novelty,3\n");
        CHECK(read_ratings_csv(again, 7).K == 7);
    }

    SECTION("bad rows carry their row number") {
        std::istringstream short_row("rater,hypothesis,metric,rating\nr,h,novelty\n");
        CHECK_THROWS_MATCHES(read_ratings_csv(short_row), ParseError,
                             Message("row 2: rating row needs 4 fields"));
        std::istringstream bad_value("r,h,novelty,high\n");
        CHECK_THROWS_MATCHES(read_ratings_csv(bad_value), ParseError,
                             Message("row 1: rating value not an integer: high"));
    }
}

TEST_CASE("the analytic gradient matches central finite differences") {
    RaschData data = panel_data();
    RaschModel model(data);
    std::mt19937 rng(555);
    std::normal_distribution<double> jitter(0.0, 0.4);
    const double h = 1e-5;
    for (int point = 0; point < 10; ++point) {
        Eigen::VectorXd th = model.start();
        for (int d = 0; d < th.size(); ++d) th[d] += jitter(rng);
        Eigen::VectorXd g = model.grad(th);
        for (int d = 0; d < th.size(); ++d) {
            Eigen::VectorXd hi = th, lo = th;
            hi[d] += h;
            lo[d] -= h;
            double fd = (model.logpost(hi) - model.logpost(lo)) / (2 * h);
            double rel = std::abs(g[d] - fd) / std::max(1.0, std::abs(fd));
            CAPTURE(point, d, g[d], fd);
            CHECK(rel <= 1e-6);
        }
    }
}

TEST_CASE("a full panel fits cleanly with ordered thresholds and finite errors") {
    RaschData data = panel_data();
    RaschFit fit = fit_rasch_map(data);
    CHECK(fit.converged);
    CHECK(fit.warnings.empty());
    CHECK(fit.K == 5);
    REQUIRE(fit.tau.size() == 4);
    check_tau_ordered(fit.tau);

    double beta_sum = 0.0;
    for (const auto& [metric, b] : fit.beta) beta_sum += b;
    CHECK_THAT(beta_sum, WithinAbs(0.0, 1e-9));
    CHECK(fit.beta.size() == 4);
    CHECK(fit.u.size() == 3);
    CHECK(fit.v.size() == 8);  // 2 hypotheses x 4 metrics

    REQUIRE(fit.tau_se.size() == 4);
    for (double se : fit.tau_se) CHECK((std::isfinite(se) && se >= 0.0));
    for (const auto& [metric, se] : fit.beta_se) CHECK((std::isfinite(se) && se >= 0.0));
    for (const auto& [rater, se] : fit.u_se) CHECK((std::isfinite(se) && se >= 0.0));
    for (const auto& [cell, se] : fit.v_se) CHECK((std::isfinite(se) && se >= 0.0));
}

TEST_CASE("renaming a rater does not move the estimates") {
    RaschData data = panel_data();
    RaschFit base = fit_rasch_map(data);

    RaschData renamed = data;
    for (auto& r : renamed.ratings)
        if (r.rater == "r1") r.rater = "zz";  // sorts last instead of first
    RaschFit moved = fit_rasch_map(renamed);

    REQUIRE(moved.tau.size() == base.tau.size());
    for (size_t k = 0; k < base.tau.size(); ++k)
        CHECK_THAT(moved.tau[k], WithinAbs(base.tau[k], 1e-5));
    for (const auto& [metric, b] : base.beta)
        CHECK_THAT(moved.beta.at(metric), WithinAbs(b, 1e-5));
    CHECK_THAT(moved.u.at("zz"), WithinAbs(base.u.at("r1"), 1e-5));
    CHECK_THAT(moved.u.at("r2"), WithinAbs(base.u.at("r2"), 1e-5));
}

TEST_CASE("the joint fit matches a coordinate-ascent reference for one rater") {
    RaschData data = single_rater_data();
    RaschOptions opts;
    opts.include_v = false;
    RaschFit fit = fit_rasch_map(data, opts);
    REQUIRE(fit.converged);
    check_tau_ordered(fit.tau);

    auto oracle = oracles::ordinal_single_rater_oracle(data, opts);
    REQUIRE(fit.tau.size() == oracle.tau.size());
    for (size_t k = 0; k < fit.tau.size(); ++k) {
        CAPTURE(k);
        CHECK_THAT(fit.tau[k], WithinAbs(oracle.tau[k], 1e-4));
    }
    for (const auto& [metric, b] : oracle.beta) {
        CAPTURE(metric);
        CHECK_THAT(fit.beta.at(metric), WithinAbs(b, 1e-4));
    }
    CHECK_THAT(fit.u.at("judge"), WithinAbs(oracle.u, 1e-4));
    CHECK_THAT(fit.logpost, WithinAbs(oracle.logpost, 1e-6));
}

TEST_CASE("one-category data is flagged rather than silently fit") {
    RaschData data;
    data.K = 5;
    for (int j = 0; j < 3; ++j)
        data.ratings.push_back({"r", "h" + std::to_string(j), "novelty", 3});
    RaschFit fit = fit_rasch_map(data);
    bool saw = false;
    for (const auto& w : fit.warnings)
        if (w == "all ratings in one category; thresholds diverge toward the cap") saw = true;
    CHECK(saw);
    check_tau_ordered(fit.tau);
}

TEST_CASE("category probabilities form a proper distribution") {
    RaschData data = panel_data();
    RaschFit fit = fit_rasch_map(data);
    for (double eta : {-2.0, -0.3, 0.0, 0.7, 2.5}) {
        auto p = category_probs(fit.tau, eta);
        REQUIRE(p.size() == 5);
        double total = 0.0;
        for (double pk : p) {
            CHECK(pk >= 0.0);
            total += pk;
        }
        CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    }

    // The fit-level overload is the tau-level one evaluated at the cell's eta.
    auto direct = category_probs(fit, "r1", "h2", "novelty");
    auto via_eta = category_probs(fit.tau, rasch_eta(fit, "r1", "h2", "novelty"));
    REQUIRE(direct.size() == via_eta.size());
    for (size_t k = 0; k < direct.size(); ++k) CHECK_THAT(direct[k], WithinAbs(via_eta[k], 1e-15));

    // Unknown components fall back to population-level zeros.
    CHECK(rasch_eta(fit, "nobody", "nothing", "nometric") == 0.0);
    double eta_known = rasch_eta(fit, "r1", "h1", "novelty");
    CHECK_THAT(eta_known,
               WithinAbs(fit.beta.at("novelty") + fit.u.at("r1") + fit.v.at({"h1", "novelty"}),
                         1e-15));
}
