#pragma once
// Quasi-variances: per-system numbers q_i chosen so that q_i + q_j
// approximates the variance of the contrast beta_i - beta_j for every pair.
// They let a table report one uncertainty per system even though only
// contrasts are identified. The default fit minimizes
//   sum_{i<j} (q_i + q_j - v_ij)^2
// which has a closed form; nonnegativity is enforced by an active-set pass
// when the unconstrained solution dips below zero. A log-scale variant
// minimizes the same loss on log(q_i + q_j) vs log(v_ij), which favors small
// relative (rather than absolute) discrepancies.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "../errors.hpp"
#include "bradley_terry.hpp"

namespace hypoforge {

struct QuasiVariances {
    std::vector<std::string> systems;
    std::map<std::string, double> q;
    // (i, j, (q_i+q_j)/v_ij - 1) for every pair i<j in `systems` order; the
    // standard report of how faithful the approximation is.
    std::vector<std::tuple<std::string, std::string, double>> relative_errors;
    bool underdetermined = false;  // two systems: only q_1+q_2 is pinned down
    std::vector<std::string> notes;

    double of(const std::string& id) const {
        auto it = q.find(id);
        if (it == q.end()) throw InputError("unknown system: " + id);
        return it->second;
    }
};

namespace detail {

// Active-set nonnegative solve of min sum_{i<j} (q_i+q_j-v_ij)^2. Starts
// from the unconstrained optimum; repeatedly pins negative coordinates to
// zero and re-solves the normal equations over the free set.
inline Eigen::VectorXd nnls_quasi(const Eigen::MatrixXd& v) {
    int n = static_cast<int>(v.rows());
    std::set<int> zeroed;
    Eigen::VectorXd q(n);
    for (int round = 0; round <= n; ++round) {
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            if (!zeroed.count(i)) free.push_back(i);
        q.setZero();
        if (!free.empty()) {
            // Normal equations for the free coordinates, zeros held fixed:
            // for i free: (n-2) q_i + sum_{j free} q_j = sum_{j != i} v_ij.
            int m = static_cast<int>(free.size());
            Eigen::MatrixXd a = Eigen::MatrixXd::Ones(m, m);
            Eigen::VectorXd b(m);
            for (int r = 0; r < m; ++r) {
                a(r, r) = static_cast<double>(n - 1);
                double rhs = 0;
                for (int j = 0; j < n; ++j)
                    if (j != free[r]) rhs += v(free[r], j);
                b[r] = rhs;
            }
            Eigen::VectorXd sol = a.fullPivLu().solve(b);
            for (int r = 0; r < m; ++r) q[free[r]] = sol[r];
        }
        int worst = -1;
        double worst_val = -1e-12;
        for (int i = 0; i < n; ++i)
            if (q[i] < worst_val) worst = i, worst_val = q[i];
        if (worst < 0) break;
        zeroed.insert(worst);
    }
    for (int i = 0; i < n; ++i) q[i] = std::max(q[i], 0.0);
    return q;
}

// Coordinate descent for the log-scale loss sum (log(q_i+q_j) - log v_ij)^2.
// Each coordinate is minimized by 1-D Newton with backtracking; the loss is
// smooth and coordinate-wise convex enough for this to settle quickly at the
// sizes involved (a handful of systems).
inline Eigen::VectorXd log_scale_quasi(const Eigen::MatrixXd& v, Eigen::VectorXd q) {
    int n = static_cast<int>(v.rows());
    const double floor = 1e-10;
    for (int i = 0; i < n; ++i) q[i] = std::max(q[i], floor);
    auto loss = [&](const Eigen::VectorXd& qq) {
        double l = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double d = std::log(qq[i] + qq[j]) - std::log(v(i, j));
                l += d * d;
            }
        return l;
    };
    double cur = loss(q);
    for (int sweep = 0; sweep < 500; ++sweep) {
        double before = cur;
        for (int i = 0; i < n; ++i) {
            double g = 0, h = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                double s = q[i] + q[j];
                double d = std::log(s) - std::log(v(i, j));
                g += 2 * d / s;
                h += 2 * (1 - d) / (s * s);
            }
            double step = h > 0 ? -g / h : -g;
            for (int bt = 0; bt < 40 && step != 0.0; ++bt, step /= 2) {
                double cand = std::max(q[i] + step, floor);
                double old = q[i];
                q[i] = cand;
                double l = loss(q);
                if (l < cur) {
                    cur = l;
                    break;
                }
                q[i] = old;
            }
        }
        if (before - cur < 1e-14) break;
    }
    return q;
}

}  // namespace detail

// Fits quasi-variances to a matrix of contrast variances v(i,j) =
// Var(beta_i - beta_j). The matrix must be symmetric with positive
// off-diagonal entries; the diagonal is ignored.
inline QuasiVariances quasi_variances_from_contrasts(const std::vector<std::string>& systems,
                                                     const Eigen::MatrixXd& v,
                                                     bool log_scale = false) {
    int n = static_cast<int>(systems.size());
    if (n < 2) throw InputError("need at least two systems");
    if (v.rows() != n || v.cols() != n) throw InputError("contrast matrix shape mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(v(i, j) - v(j, i)) > 1e-9) throw InputError("contrast matrix asymmetric");
            if (!(v(i, j) > 0)) throw DomainError("contrast variance must be positive");
        }

    QuasiVariances out;
    out.systems = systems;
    Eigen::VectorXd q(n);
    if (n == 2) {
        // One equation, two unknowns: split evenly and say so.
        q.setConstant(v(0, 1) / 2);
        out.underdetermined = true;
        out.notes.push_back("two systems: only q_1+q_2 is determined; split evenly");
    } else {
        // Closed form: with R_i = sum_{j != i} v_ij and S = sum R / (2(n-1)),
        // the stationary point is q_i = (R_i - S) / (n - 2).
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += v(i, j);
            r[i] = s;
        }
        double total = r.sum() / (2.0 * (n - 1));
        for (int i = 0; i < n; ++i) q[i] = (r[i] - total) / (n - 2);
        if ((q.array() < 0).any()) {
            q = detail::nnls_quasi(v);
            out.notes.push_back("unconstrained solution went negative; projected to q >= 0");
        }
    }
    if (log_scale) q = detail::log_scale_quasi(v, q);

    for (int i = 0; i < n; ++i) out.q[systems[i]] = q[i];
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.relative_errors.emplace_back(systems[i], systems[j],
                                             (q[i] + q[j]) / v(i, j) - 1.0);
    return out;
}

// Convenience overload: pulls the contrast variances out of a fitted
// Bradley-Terry model's covariance.
inline QuasiVariances quasi_variances(const BTFit& fit, bool log_scale = false) {
    int n = static_cast<int>(fit.systems.size());
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) v(i, j) = fit.contrast_variance(fit.systems[i], fit.systems[j]);
    return quasi_variances_from_contrasts(fit.systems, v, log_scale);
}

// 95% comparison interval for one system: beta_hat +/- 1.96 sqrt(q). Two
// such intervals overlap roughly when the pairwise difference is not
// significant, which is what makes the plot readable. q = 0 collapses to a
// point interval, which is the honest rendering of that edge case.
inline std::pair<double, double> comparison_interval(double beta_hat, double q) {
    if (q < 0) throw DomainError("quasi-variance must be nonnegative");
    double half = 1.96 * std::sqrt(q);
    return {beta_hat - half, beta_hat + half};
}

}  // namespace hypoforge
