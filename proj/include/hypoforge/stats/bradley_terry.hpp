#pragma once
// Paired-comparison ability models. The primary fitter is a Bradley-Terry
// model with a presentation-order intercept: the log odds that the
// first-presented system beats the second is alpha + beta_first -
// beta_second, with ties counted as half a win for each side. A Davidson
// variant models ties explicitly with a separate tie parameter instead of
// splitting them. Abilities are reported sum-to-zero; the full covariance of
// (alpha, beta) is carried so downstream code can form contrast variances.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../csv.hpp"
#include "../errors.hpp"
#include "optim.hpp"

namespace hypoforge {

enum class Metric { Novelty, Relevance, Significance, Verifiability };

inline std::string to_string(Metric m) {
    switch (m) {
        case Metric::Novelty: return "novelty";
        case Metric::Relevance: return "relevance";
        case Metric::Significance: return "significance";
        case Metric::Verifiability: return "verifiability";
    }
    return "?";
}

inline Metric metric_from_string(const std::string& s) {
    if (s == "novelty") return Metric::Novelty;
    if (s == "relevance") return Metric::Relevance;
    if (s == "significance") return Metric::Significance;
    if (s == "verifiability") return Metric::Verifiability;
    throw ParseError("unknown metric token: " + s);
}

inline constexpr Metric kAllMetrics[] = {Metric::Novelty, Metric::Relevance, Metric::Significance,
                                         Metric::Verifiability};

enum class Outcome { FirstWins, SecondWins, Tie };

inline std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::FirstWins: return "first";
        case Outcome::SecondWins: return "second";
        case Outcome::Tie: return "tie";
    }
    return "?";
}

inline Outcome outcome_from_string(const std::string& s) {
    if (s == "first") return Outcome::FirstWins;
    if (s == "second") return Outcome::SecondWins;
    if (s == "tie") return Outcome::Tie;
    throw ParseError("unknown outcome token: " + s);
}

// One judged pairing, in presentation order: `first` was shown first.
struct ComparisonRecord {
    std::string first;
    std::string second;
    Metric metric = Metric::Novelty;
    Outcome outcome = Outcome::FirstWins;
};

// ---------------------------------------------------------------------------
// CSV round-trip (columns: first,second,metric,outcome).

inline void write_comparisons_csv(const std::vector<ComparisonRecord>& records, std::ostream& out) {
    write_csv_row(out, {"first", "second", "metric", "outcome"});
    for (const auto& r : records)
        write_csv_row(out, {r.first, r.second, to_string(r.metric), to_string(r.outcome)});
}

inline std::vector<ComparisonRecord> read_comparisons_csv(std::istream& in) {
    auto rows = parse_csv(in);
    std::vector<ComparisonRecord> out;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (i == 0 && !row.empty() && row[0] == "first") continue;  // header
        if (row.empty() || (row.size() == 1 && row[0].empty())) continue;
        const std::string where = "row " + std::to_string(i + 1) + ": ";
        if (row.size() != 4) throw ParseError(where + "comparison row needs 4 fields");
        try {
            out.push_back({row[0], row[1], metric_from_string(row[2]), outcome_from_string(row[3])});
        } catch (const Error& e) {
            throw ParseError(where + e.what());
        }
    }
    return out;
}

namespace detail {

// Union-find over system indices; used to reject disconnected comparison
// graphs before fitting (abilities of separate components are not on a
// common scale).
class UnionFind {
public:
    explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    size_t find(size_t a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }
    void unite(size_t a, size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<size_t> parent_;
};

struct IndexedComparisons {
    std::vector<std::string> systems;  // sorted ids
    std::vector<int> first, second;    // per record, index into systems
    std::vector<double> weight;        // first-win weight: 1, 0, or 0.5
};

inline IndexedComparisons index_comparisons(const std::vector<ComparisonRecord>& records) {
    if (records.empty()) throw InputError("no comparison records");
    std::set<std::string> ids;
    for (const auto& r : records) {
        if (r.first == r.second) throw InputError("system compared against itself: " + r.first);
        ids.insert(r.first);
        ids.insert(r.second);
    }
    IndexedComparisons ix;
    ix.systems.assign(ids.begin(), ids.end());
    auto index_of = [&](const std::string& s) {
        return static_cast<int>(std::lower_bound(ix.systems.begin(), ix.systems.end(), s) -
                                ix.systems.begin());
    };
    for (const auto& r : records) {
        ix.first.push_back(index_of(r.first));
        ix.second.push_back(index_of(r.second));
        ix.weight.push_back(r.outcome == Outcome::FirstWins    ? 1.0
                            : r.outcome == Outcome::SecondWins ? 0.0
                                                               : 0.5);
    }

    UnionFind uf(ix.systems.size());
    for (size_t k = 0; k < ix.first.size(); ++k)
        uf.unite(static_cast<size_t>(ix.first[k]), static_cast<size_t>(ix.second[k]));
    std::map<size_t, std::vector<std::string>> components;
    for (size_t i = 0; i < ix.systems.size(); ++i)
        components[uf.find(i)].push_back(ix.systems[i]);
    if (components.size() > 1) {
        std::ostringstream msg;
        msg << "comparison graph is disconnected; components:";
        for (const auto& [root, members] : components) {
            msg << " {";
            for (size_t i = 0; i < members.size(); ++i) msg << (i ? " " : "") << members[i];
            msg << "}";
        }
        throw IdentifiabilityError(msg.str());
    }
    return ix;
}

// Sum-to-zero map: beta = A b with b the first n-1 abilities free and
// beta_n = -sum(b). Returns the n x (n-1) matrix A.
inline Eigen::MatrixXd sum_zero_map(int n) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n - 1);
    for (int i = 0; i + 1 < n; ++i) a(i, i) = 1.0;
    a.row(n - 1).setConstant(-1.0);
    return a;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace detail

struct BTFit {
    std::vector<std::string> systems;  // sorted ids
    bool has_order_effect = false;
    double alpha = 0.0;                // presentation-order intercept (0 when disabled)
    std::map<std::string, double> beta;
    // Covariance of (alpha, beta_1..beta_n) in `systems` order, mapped back
    // from the identified parameterization (singular across betas by
    // construction; contrasts are what it is for).
    Eigen::MatrixXd vcov;
    double loglik = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;

    double beta_of(const std::string& id) const {
        auto it = beta.find(id);
        if (it == beta.end()) throw InputError("unknown system: " + id);
        return it->second;
    }
    int index_of(const std::string& id) const {
        auto it = std::lower_bound(systems.begin(), systems.end(), id);
        if (it == systems.end() || *it != id) throw InputError("unknown system: " + id);
        return static_cast<int>(it - systems.begin());
    }
    // Var(beta_i - beta_j), read off the mapped covariance.
    double contrast_variance(const std::string& i, const std::string& j) const {
        int a = index_of(i) + 1, b = index_of(j) + 1;  // +1 skips alpha
        return vcov(a, a) + vcov(b, b) - 2 * vcov(a, b);
    }
};

// Fits the Bradley-Terry model by Newton iteration on the identified
// parameterization (alpha if enabled, then beta_1..beta_{n-1}). Ties enter
// as a half win for each side. Callers fit one metric's records at a time;
// the metric field is not consulted here.
inline BTFit fit_bradley_terry(const std::vector<ComparisonRecord>& records,
                               bool include_order_effect = true) {
    auto ix = detail::index_comparisons(records);
    int n = static_cast<int>(ix.systems.size());
    if (n < 2) throw InputError("need at least two systems");
    int n_alpha = include_order_effect ? 1 : 0;
    int dim = n_alpha + (n - 1);

    bool any_decisive = false;
    for (double w : ix.weight)
        if (w != 0.5) any_decisive = true;

    Eigen::MatrixXd a = detail::sum_zero_map(n);
    // Per-record gradient of the linear predictor w.r.t. (alpha?, b).
    auto predictor_grad = [&](size_t k) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
        if (n_alpha) g[0] = 1.0;
        int f = ix.first[k], s = ix.second[k];
        for (int c = 0; c + 1 < n; ++c) g[c + n_alpha] = a(f, c) - a(s, c);
        return g;
    };
    auto predictor = [&](const Eigen::VectorXd& th, size_t k) {
        double x = n_alpha ? th[0] : 0.0;
        int f = ix.first[k], s = ix.second[k];
        for (int c = 0; c + 1 < n; ++c) x += (a(f, c) - a(s, c)) * th[c + n_alpha];
        return x;
    };

    auto loglik = [&](const Eigen::VectorXd& th) {
        double ll = 0;
        for (size_t k = 0; k < ix.weight.size(); ++k) {
            double x = predictor(th, k), w = ix.weight[k];
            // w*log(p) + (1-w)*log(1-p) written via log1p for stability
            ll += w * -std::log1p(std::exp(-x)) + (1 - w) * -std::log1p(std::exp(x));
        }
        return ll;
    };
    auto grad = [&](const Eigen::VectorXd& th) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
        for (size_t k = 0; k < ix.weight.size(); ++k) {
            double resid = ix.weight[k] - detail::sigmoid(predictor(th, k));
            g += resid * predictor_grad(k);
        }
        return g;
    };
    auto hess = [&](const Eigen::VectorXd& th) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
        for (size_t k = 0; k < ix.weight.size(); ++k) {
            double p = detail::sigmoid(predictor(th, k));
            Eigen::VectorXd g = predictor_grad(k);
            h -= p * (1 - p) * g * g.transpose();
        }
        return h;
    };

    auto res = newton_maximize(loglik, grad, hess, Eigen::VectorXd::Zero(dim));

    BTFit fit;
    fit.systems = ix.systems;
    fit.has_order_effect = include_order_effect;
    fit.alpha = n_alpha ? res.x[0] : 0.0;
    Eigen::VectorXd beta_full = a * res.x.tail(n - 1);
    for (int i = 0; i < n; ++i) fit.beta[ix.systems[i]] = beta_full[i];
    fit.loglik = res.value;
    fit.converged = res.converged;
    if (!any_decisive) fit.warnings.push_back("no decisive outcomes; abilities driven to zero");
    if (res.capped)
        fit.warnings.push_back(
            "estimate diverged (perfect separation likely); parameters capped at +/-10");
    else if (!res.converged)
        fit.warnings.push_back("Newton iteration did not converge");

    // Covariance: inverse observed information on the identified scale, then
    // pushed through the block map diag(1, A) to (alpha, full beta). The
    // alpha row/column is zero when the order effect is disabled.
    Eigen::MatrixXd info = -hess(res.x);
    Eigen::MatrixXd cov_id = info.completeOrthogonalDecomposition().pseudoInverse();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, dim);
    if (n_alpha) m(0, 0) = 1.0;
    m.block(1, n_alpha, n, n - 1) = a;
    fit.vcov = m * cov_id * m.transpose();
    return fit;
}

// ---------------------------------------------------------------------------
// Davidson tie model: with p_i = exp(beta_i), the probabilities for the pair
// (i, j) are p_i/D, p_j/D and nu*sqrt(p_i p_j)/D with D the sum. There is no
// order-effect term; presentation order only determines which side a record
// calls "first".

struct DavidsonFit {
    std::vector<std::string> systems;
    std::map<std::string, double> beta;
    double nu = 0.0;  // tie propensity
    double loglik = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;
};

inline DavidsonFit fit_davidson(const std::vector<ComparisonRecord>& records) {
    auto ix = detail::index_comparisons(records);
    int n = static_cast<int>(ix.systems.size());
    if (n < 2) throw InputError("need at least two systems");
    int dim = n;  // (n-1) free abilities + log nu

    size_t n_ties = 0;
    for (double w : ix.weight) n_ties += (w == 0.5);
    bool no_ties = n_ties == 0, all_ties = n_ties == ix.weight.size();
    const double lam_floor = -30.0, lam_cap = 30.0;

    Eigen::MatrixXd a = detail::sum_zero_map(n);
    // Divide the pair probabilities through by sqrt(p_i p_j): with
    // x = beta_first - beta_second and lam = log nu,
    //   P(first) = e^{x/2}/D,  P(second) = e^{-x/2}/D,  P(tie) = e^{lam}/D,
    //   D = e^{x/2} + e^{-x/2} + e^{lam}.
    auto terms = [&](const Eigen::VectorXd& th, size_t k, double& x, double& lam) {
        x = 0;
        int f = ix.first[k], s = ix.second[k];
        for (int c = 0; c + 1 < n; ++c) x += (a(f, c) - a(s, c)) * th[c];
        lam = th[dim - 1];
    };
    auto loglik = [&](const Eigen::VectorXd& th) {
        double ll = 0;
        for (size_t k = 0; k < ix.weight.size(); ++k) {
            double x, lam;
            terms(th, k, x, lam);
            double m = std::max({x / 2, -x / 2, lam});  // log-sum-exp guard
            double logd =
                m + std::log(std::exp(x / 2 - m) + std::exp(-x / 2 - m) + std::exp(lam - m));
            double w = ix.weight[k];
            ll += (w == 1.0 ? x / 2 : w == 0.0 ? -x / 2 : lam) - logd;
        }
        return ll;
    };
    auto grad = [&](const Eigen::VectorXd& th) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
        for (size_t k = 0; k < ix.weight.size(); ++k) {
            double x, lam;
            terms(th, k, x, lam);
            double s = std::exp(x / 2), t = std::exp(-x / 2), v = std::exp(lam);
            double d = s + t + v;
            double w = ix.weight[k];
            double dll_dx = (w == 1.0 ? 0.5 : w == 0.0 ? -0.5 : 0.0) - (s - t) / (2 * d);
            double dll_dlam = (w == 0.5 ? 1.0 : 0.0) - v / d;
            int f = ix.first[k], sec = ix.second[k];
            for (int c = 0; c + 1 < n; ++c) g[c] += dll_dx * (a(f, c) - a(sec, c));
            g[dim - 1] += dll_dlam;
        }
        return g;
    };

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
    NewtonOptions opts;
    opts.param_cap = 30.0;  // roomy; lam legitimately runs far when ties are rare
    auto res = newton_maximize(loglik, grad, fd_hessian_from_grad(grad), x0, opts);

    DavidsonFit fit;
    fit.systems = ix.systems;
    double lam = std::clamp(res.x[dim - 1], lam_floor, lam_cap);
    // With no ties the maximum sits on the lam -> -inf boundary; Newton stops
    // wherever the tie mass drops below its gradient tolerance, so report the
    // floor itself rather than that stopping point.
    if (no_ties) lam = lam_floor;
    fit.nu = std::exp(lam);
    Eigen::VectorXd beta_full = a * res.x.head(n - 1);
    for (int i = 0; i < n; ++i) fit.beta[ix.systems[i]] = beta_full[i];
    fit.loglik = res.value;
    fit.converged = res.converged || res.capped;
    if (no_ties)
        fit.warnings.push_back("no ties observed; tie parameter pinned near zero");
    if (all_ties)
        fit.warnings.push_back("only ties observed; abilities driven to zero");
    if (!res.converged && !res.capped) fit.warnings.push_back("Newton iteration did not converge");
    return fit;
}

// ---------------------------------------------------------------------------
// Synthetic tournament generator for recovery tests. Outcomes are drawn from
// a latent-logistic scheme: the latent margin is logistic with location
// alpha + beta_first - beta_second, and margins within +/-tie_window of zero
// are scored as ties. Splitting such ties half-and-half at fit time is very
// nearly unbiased for small windows, which is the point: recovered abilities
// should land on the generating ones.

struct SimulationResult {
    std::vector<ComparisonRecord> records;
    double tie_fraction = 0.0;
};

inline SimulationResult simulate_comparisons(const std::map<std::string, double>& abilities,
                                             double alpha, int n_comparisons,
                                             double tie_window, unsigned seed,
                                             Metric metric = Metric::Novelty) {
    if (abilities.size() < 2) throw InputError("need at least two systems to simulate");
    if (n_comparisons < 1) throw InputError("need at least one comparison");
    if (tie_window < 0) throw InputError("tie window must be nonnegative");
    std::vector<std::pair<std::string, double>> sys(abilities.begin(), abilities.end());
    std::mt19937 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, sys.size() - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    SimulationResult out;
    size_t ties = 0;
    for (int k = 0; k < n_comparisons; ++k) {
        size_t i = pick(rng), j = pick(rng);
        while (j == i) j = pick(rng);
        if (unif(rng) < 0.5) std::swap(i, j);  // randomize presentation order
        double x = alpha + sys[i].second - sys[j].second;
        double u = unif(rng);
        double latent = x + std::log(u / (1 - u));  // logistic about x
        Outcome o = latent > tie_window    ? Outcome::FirstWins
                    : latent < -tie_window ? Outcome::SecondWins
                                           : Outcome::Tie;
        ties += (o == Outcome::Tie);
        out.records.push_back({sys[i].first, sys[j].first, metric, o});
    }
    out.tie_fraction = static_cast<double>(ties) / n_comparisons;
    return out;
}

}  // namespace hypoforge
