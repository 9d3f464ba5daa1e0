#pragma once
// Ordinal-rating model for survey data: a cumulative-probit (graded
// response) model with additive effects,
//   P(Y_ijm <= k) = Phi(tau_k - eta_ijm),    eta_ijm = beta_m + u_i + v_jm,
// where i is the rater, j the hypothesis, m the metric. Raters vary in
// leniency (u_i) and a hypothesis can be strong on one metric and weak on
// another (v_jm); both get Gaussian priors and the whole thing is fit by MAP
// with Laplace standard errors. Thresholds are kept ordered by construction:
// tau_1 is free and each later threshold adds exp(delta_k). Metric effects
// are identified sum-to-zero (a common shift of beta and tau cancels out).

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "../csv.hpp"
#include "../errors.hpp"
#include "optim.hpp"

namespace hypoforge {

struct Rating {
    std::string rater;
    std::string hypothesis;
    std::string metric;
    int value = 0;  // 1..K
};

struct RaschData {
    std::vector<Rating> ratings;
    int K = 5;  // number of ordinal categories

    void validate() const {
        if (ratings.empty()) throw InputError("no ratings");
        if (K < 2) throw InputError("need at least two rating categories");
        for (const auto& r : ratings)
            if (r.value < 1 || r.value > K)
                throw RangeError("rating outside 1.." + std::to_string(K) + ": " +
                                 std::to_string(r.value));
    }
};

struct RaschOptions {
    double sigma_u = 1.0;    // prior sd of rater effects
    double sigma_v = 1.0;    // prior sd of hypothesis-on-metric effects
    bool include_u = true;   // set false to pin all u_i = 0
    bool include_v = true;   // set false to pin all v_jm = 0
};

// ---------------------------------------------------------------------------
// CSV round-trip (columns: rater,hypothesis,metric,rating).

inline void write_ratings_csv(const RaschData& data, std::ostream& out) {
    write_csv_row(out, {"rater", "hypothesis", "metric", "rating"});
    for (const auto& r : data.ratings)
        write_csv_row(out, {r.rater, r.hypothesis, r.metric, std::to_string(r.value)});
}

// K = 0 means infer from the data (largest observed value, floor 2).
inline RaschData read_ratings_csv(std::istream& in, int K = 0) {
    auto rows = parse_csv(in);
    RaschData data;
    int max_seen = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (i == 0 && !row.empty() && row[0] == "rater") continue;  // header
        if (row.empty() || (row.size() == 1 && row[0].empty())) continue;
        const std::string where = "row " + std::to_string(i + 1) + ": ";
        if (row.size() != 4) throw ParseError(where + "rating row needs 4 fields");
        int value = 0;
        try {
            value = std::stoi(row[3]);
        } catch (const std::exception&) {
            throw ParseError(where + "rating value not an integer: " + row[3]);
        }
        data.ratings.push_back({row[0], row[1], row[2], value});
        max_seen = std::max(max_seen, value);
    }
    data.K = K > 0 ? K : std::max(max_seen, 2);
    return data;
}

namespace detail {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// P(b < Z <= a) with a > b, either side possibly infinite. Written via the
// nearer tail to dodge cancellation when both cut points sit far out.
inline double interval_prob(double a, double b) {
    double p;
    if (b == -std::numeric_limits<double>::infinity())
        p = norm_cdf(a);
    else if (a == std::numeric_limits<double>::infinity())
        p = 0.5 * std::erfc(b / std::sqrt(2.0));
    else if (a <= 0)
        p = norm_cdf(a) - norm_cdf(b);
    else if (b >= 0)
        p = 0.5 * (std::erfc(b / std::sqrt(2.0)) - std::erfc(a / std::sqrt(2.0)));
    else
        p = norm_cdf(a) - norm_cdf(b);
    return std::max(p, 1e-300);
}

}  // namespace detail

// The packed-parameter view of the model. Exposed (rather than buried in the
// fit routine) so the gradient can be checked against finite differences and
// so reduced variants (no rater effects, no cell effects) drive the same
// code. Packing order: tau_1, delta_2..delta_{K-1}, free metric effects
// (first M-1 of the sum-to-zero vector), rater effects, cell effects.
class RaschModel {
public:
    RaschModel(const RaschData& data, RaschOptions opts = {}) : opts_(opts), k_(data.K) {
        data.validate();
        std::set<std::string> raters, metrics;
        std::set<std::pair<std::string, std::string>> cells;
        for (const auto& r : data.ratings) {
            raters.insert(r.rater);
            metrics.insert(r.metric);
            cells.insert({r.hypothesis, r.metric});
        }
        raters_.assign(raters.begin(), raters.end());
        metrics_.assign(metrics.begin(), metrics.end());
        cells_.assign(cells.begin(), cells.end());
        auto pos = [](const auto& vec, const auto& key) {
            return static_cast<int>(std::lower_bound(vec.begin(), vec.end(), key) - vec.begin());
        };
        for (const auto& r : data.ratings) {
            Obs o;
            o.rater = pos(raters_, r.rater);
            o.metric = pos(metrics_, r.metric);
            o.cell = pos(cells_, std::make_pair(r.hypothesis, r.metric));
            o.y = r.value;
            obs_.push_back(o);
        }
    }

    int K() const { return k_; }
    const std::vector<std::string>& raters() const { return raters_; }
    const std::vector<std::string>& metrics() const { return metrics_; }
    const std::vector<std::pair<std::string, std::string>>& cells() const { return cells_; }

    int n_tau() const { return k_ - 1; }
    int n_beta_free() const { return static_cast<int>(metrics_.size()) - 1; }
    int n_u() const { return opts_.include_u ? static_cast<int>(raters_.size()) : 0; }
    int n_v() const { return opts_.include_v ? static_cast<int>(cells_.size()) : 0; }
    int dim() const { return 1 + (k_ - 2) + n_beta_free() + n_u() + n_v(); }

    struct Natural {
        std::vector<double> tau;   // K-1 ordered thresholds
        std::vector<double> beta;  // per metric, sums to zero
        std::vector<double> u;     // per rater (zeros when pinned)
        std::vector<double> v;     // per cell (zeros when pinned)
    };

    Natural unpack(const Eigen::VectorXd& th) const {
        Natural nat;
        nat.tau.resize(k_ - 1);
        nat.tau[0] = th[0];
        for (int k = 1; k < k_ - 1; ++k) nat.tau[k] = nat.tau[k - 1] + std::exp(th[k]);
        int o = 1 + (k_ - 2);
        int m = static_cast<int>(metrics_.size());
        nat.beta.assign(m, 0.0);
        double sum = 0;
        for (int c = 0; c + 1 < m; ++c) {
            nat.beta[c] = th[o + c];
            sum += th[o + c];
        }
        nat.beta[m - 1] = -sum;
        o += n_beta_free();
        nat.u.assign(raters_.size(), 0.0);
        for (int i = 0; i < n_u(); ++i) nat.u[i] = th[o + i];
        o += n_u();
        nat.v.assign(cells_.size(), 0.0);
        for (int c = 0; c < n_v(); ++c) nat.v[c] = th[o + c];
        return nat;
    }

    double logpost(const Eigen::VectorXd& th) const {
        Natural nat = unpack(th);
        double lp = 0;
        for (const auto& o : obs_) {
            double eta = nat.beta[o.metric] + nat.u[o.rater] + nat.v[o.cell];
            lp += std::log(detail::interval_prob(upper(nat, o.y) - eta, lower(nat, o.y) - eta));
        }
        for (int i = 0; i < n_u(); ++i) lp -= nat.u[i] * nat.u[i] / (2 * opts_.sigma_u * opts_.sigma_u);
        for (int c = 0; c < n_v(); ++c) lp -= nat.v[c] * nat.v[c] / (2 * opts_.sigma_v * opts_.sigma_v);
        return lp;
    }

    Eigen::VectorXd grad(const Eigen::VectorXd& th) const {
        Natural nat = unpack(th);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim());
        int m = static_cast<int>(metrics_.size());
        int o_beta = 1 + (k_ - 2), o_u = o_beta + n_beta_free(), o_v = o_u + n_u();
        for (const auto& o : obs_) {
            double eta = nat.beta[o.metric] + nat.u[o.rater] + nat.v[o.cell];
            double a = upper(nat, o.y) - eta, b = lower(nat, o.y) - eta;
            double p = detail::interval_prob(a, b);
            double pa = std::isfinite(a) ? detail::norm_pdf(a) : 0.0;
            double pb = std::isfinite(b) ? detail::norm_pdf(b) : 0.0;
            double dl_deta = -(pa - pb) / p;

            // Thresholds: the upper cut is tau_{y}, the lower tau_{y-1}
            // (natural indexing); push through tau_k = tau_1 + sum exp(delta).
            auto add_tau = [&](int k_nat, double coef) {  // k_nat in 1..K-1
                g[0] += coef;
                for (int d = 2; d <= k_nat; ++d) g[d - 1] += coef * std::exp(th[d - 1]);
            };
            if (o.y <= k_ - 1) add_tau(o.y, pa / p);
            if (o.y >= 2) add_tau(o.y - 1, -pb / p);

            // Metric effect through the sum-to-zero map.
            for (int c = 0; c + 1 < m; ++c) {
                double dbeta = (o.metric == c ? 1.0 : 0.0) - (o.metric == m - 1 ? 1.0 : 0.0);
                if (dbeta != 0.0) g[o_beta + c] += dl_deta * dbeta;
            }
            if (opts_.include_u) g[o_u + o.rater] += dl_deta;
            if (opts_.include_v) g[o_v + o.cell] += dl_deta;
        }
        for (int i = 0; i < n_u(); ++i) g[o_u + i] -= th[o_u + i] / (opts_.sigma_u * opts_.sigma_u);
        for (int c = 0; c < n_v(); ++c) g[o_v + c] -= th[o_v + c] / (opts_.sigma_v * opts_.sigma_v);
        return g;
    }

    // A sensible start: thresholds evenly spread, effects at zero.
    Eigen::VectorXd start() const {
        Eigen::VectorXd th = Eigen::VectorXd::Zero(dim());
        if (k_ == 2) {
            th[0] = 0.0;
        } else {
            th[0] = -1.0;
            double gap = 2.0 / (k_ - 2);
            for (int d = 1; d < k_ - 1; ++d) th[d] = std::log(gap);
        }
        return th;
    }

private:
    struct Obs {
        int rater, metric, cell, y;
    };
    double upper(const Natural& nat, int y) const {
        return y == k_ ? std::numeric_limits<double>::infinity() : nat.tau[y - 1];
    }
    double lower(const Natural& nat, int y) const {
        return y == 1 ? -std::numeric_limits<double>::infinity() : nat.tau[y - 2];
    }

    RaschOptions opts_;
    int k_;
    std::vector<std::string> raters_, metrics_;
    std::vector<std::pair<std::string, std::string>> cells_;
    std::vector<Obs> obs_;
};

struct RaschFit {
    int K = 0;
    std::vector<double> tau, tau_se;
    std::map<std::string, double> beta, beta_se;                          // per metric
    std::map<std::string, double> u, u_se;                                // per rater
    std::map<std::pair<std::string, std::string>, double> v, v_se;        // per (hypothesis, metric)
    double logpost = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;
};

inline RaschFit fit_rasch_map(const RaschData& data, const RaschOptions& opts = {}) {
    RaschModel model(data, opts);

    std::set<int> seen;
    for (const auto& r : data.ratings) seen.insert(r.value);

    NewtonOptions nopts;
    nopts.grad_tol = 1e-6;
    nopts.max_iters = 300;
    nopts.param_cap = 10.0;
    auto f = [&](const Eigen::VectorXd& th) { return model.logpost(th); };
    auto g = [&](const Eigen::VectorXd& th) { return model.grad(th); };
    auto res = newton_maximize(f, g, fd_hessian_from_grad(g), model.start(), nopts);

    RaschFit fit;
    fit.K = model.K();
    fit.logpost = res.value;
    fit.converged = res.converged;
    if (seen.size() == 1)
        fit.warnings.push_back("all ratings in one category; thresholds diverge toward the cap");
    if (res.capped)
        fit.warnings.push_back("some parameter hit the +/-10 cap; estimates degenerate");
    else if (!res.converged)
        fit.warnings.push_back("Newton iteration did not converge");

    auto nat = model.unpack(res.x);
    fit.tau = nat.tau;
    for (size_t m = 0; m < model.metrics().size(); ++m) fit.beta[model.metrics()[m]] = nat.beta[m];
    for (size_t i = 0; i < model.raters().size(); ++i) fit.u[model.raters()[i]] = nat.u[i];
    for (size_t c = 0; c < model.cells().size(); ++c) fit.v[model.cells()[c]] = nat.v[c];

    // Laplace: covariance = inverse negative Hessian at the mode, pushed to
    // the natural scale by the Jacobian of unpack().
    Eigen::MatrixXd h = fd_hessian_from_grad(g)(res.x);
    if (!h.allFinite()) throw FitError("Hessian not finite at the mode");
    Eigen::MatrixXd cov = (-h).completeOrthogonalDecomposition().pseudoInverse();

    int dim = model.dim();
    int K = model.K();
    int m = static_cast<int>(model.metrics().size());
    int n_nat = (K - 1) + m + static_cast<int>(model.raters().size()) +
                static_cast<int>(model.cells().size());
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_nat, dim);
    int row = 0;
    for (int k = 1; k <= K - 1; ++k, ++row) {  // tau_k
        jac(row, 0) = 1.0;
        for (int d = 2; d <= k; ++d) jac(row, d - 1) = std::exp(res.x[d - 1]);
    }
    int o_beta = 1 + (K - 2);
    for (int mm = 0; mm < m; ++mm, ++row)
        for (int c = 0; c + 1 < m; ++c)
            jac(row, o_beta + c) = (mm == c ? 1.0 : 0.0) - (mm == m - 1 ? 1.0 : 0.0);
    int o_u = o_beta + model.n_beta_free();
    for (size_t i = 0; i < model.raters().size(); ++i, ++row)
        if (model.n_u()) jac(row, o_u + static_cast<int>(i)) = 1.0;
    int o_v = o_u + model.n_u();
    for (size_t c = 0; c < model.cells().size(); ++c, ++row)
        if (model.n_v()) jac(row, o_v + static_cast<int>(c)) = 1.0;

    Eigen::VectorXd se = (jac * cov * jac.transpose()).diagonal().cwiseMax(0.0).cwiseSqrt();
    row = 0;
    fit.tau_se.assign(se.data(), se.data() + (K - 1));
    row = K - 1;
    for (int mm = 0; mm < m; ++mm) fit.beta_se[model.metrics()[mm]] = se[row++];
    for (const auto& r : model.raters()) fit.u_se[r] = se[row++];
    for (const auto& c : model.cells()) fit.v_se[c] = se[row++];

    for (size_t k = 1; k < fit.tau.size(); ++k)
        if (!(fit.tau[k] > fit.tau[k - 1]))
            throw FitError("thresholds lost their ordering");  // cannot happen by construction
    return fit;
}

// Category probabilities for a linear predictor eta under thresholds tau;
// sums to one by construction.
inline std::vector<double> category_probs(const std::vector<double>& tau, double eta) {
    int K = static_cast<int>(tau.size()) + 1;
    std::vector<double> p(K);
    double prev = 0.0;
    for (int k = 0; k < K - 1; ++k) {
        double cum = detail::norm_cdf(tau[k] - eta);
        p[k] = cum - prev;
        prev = cum;
    }
    p[K - 1] = 1.0 - prev;
    return p;
}

// Cell view of a fit: eta for (rater, hypothesis, metric), with unknown
// components treated as population-level zeros.
inline double rasch_eta(const RaschFit& fit, const std::string& rater,
                        const std::string& hypothesis, const std::string& metric) {
    double eta = 0.0;
    if (auto it = fit.beta.find(metric); it != fit.beta.end()) eta += it->second;
    if (auto it = fit.u.find(rater); it != fit.u.end()) eta += it->second;
    if (auto it = fit.v.find({hypothesis, metric}); it != fit.v.end()) eta += it->second;
    return eta;
}

inline std::vector<double> category_probs(const RaschFit& fit, const std::string& rater,
                                          const std::string& hypothesis,
                                          const std::string& metric) {
    return category_probs(fit.tau, rasch_eta(fit, rater, hypothesis, metric));
}

}  // namespace hypoforge
