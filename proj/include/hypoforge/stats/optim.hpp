#pragma once
// Small dense Newton maximizer shared by the model fitters. Step-halving
// keeps the objective monotone; a parameter cap catches separation-style
// divergence (some parameter running to infinity) and flags it instead of
// looping forever.

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "../errors.hpp"

namespace hypoforge {

struct NewtonOptions {
    double grad_tol = 1e-8;
    double step_tol = 1e-7;   // Newton step norm, relative to 1 + ||x||
    int max_iters = 100;
    double param_cap = 10.0;  // |x_i| clamp; hitting it flags divergence
    double fd_step = 1e-5;    // step for finite-difference Hessians
};

struct NewtonResult {
    Eigen::VectorXd x;
    double value = 0.0;
    bool converged = false;
    bool capped = false;  // some parameter pinned at +/- param_cap
    int iters = 0;
};

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;
using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using MatrixFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Central finite differences of an analytic gradient; symmetrized. Used by
// fitters whose Hessians are tedious but whose gradients are exact.
inline MatrixFn fd_hessian_from_grad(VectorFn grad, double step = 1e-5) {
    return [grad, step](const Eigen::VectorXd& x) {
        int n = static_cast<int>(x.size());
        Eigen::MatrixXd h(n, n);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd hi = x, lo = x;
            hi[i] += step;
            lo[i] -= step;
            h.col(i) = (grad(hi) - grad(lo)) / (2 * step);
        }
        return ((h + h.transpose()) / 2).eval();
    };
}

// Maximizes f via damped Newton steps. The Hessian is expected to be
// negative (semi)definite near the optimum; a ridge is added when the solve
// fails. Returns the final point even when unconverged - callers decide how
// loud to be about it.
inline NewtonResult newton_maximize(const ScalarFn& f, const VectorFn& grad, const MatrixFn& hess,
                                    Eigen::VectorXd x0, const NewtonOptions& opts = {}) {
    NewtonResult res;
    res.x = std::move(x0);
    res.value = f(res.x);
    if (!std::isfinite(res.value)) throw FitError("objective not finite at the starting point");

    for (res.iters = 0; res.iters < opts.max_iters; ++res.iters) {
        Eigen::VectorXd g = grad(res.x);
        if (g.norm() <= opts.grad_tol) {
            res.converged = true;
            break;
        }
        Eigen::MatrixXd h = hess(res.x);
        if (!h.allFinite()) throw FitError("Hessian not finite");

        // Solve (-H) d = g; regularize if the solve is unusable.
        Eigen::VectorXd d;
        double ridge = 0.0;
        for (int tries = 0;; ++tries) {
            Eigen::MatrixXd a = -h + ridge * Eigen::MatrixXd::Identity(h.rows(), h.cols());
            Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
            if (ldlt.info() == Eigen::Success) {
                d = ldlt.solve(g);
                if (d.allFinite() && g.dot(d) > 0) break;  // ascent direction
            }
            if (tries >= 12) {
                d = g;  // give up on curvature, take a gradient step
                break;
            }
            ridge = ridge == 0.0 ? 1e-8 : ridge * 10;
        }

        // A Newton step this small means the optimum is resolved as finely as
        // the objective's scale allows: with many records the absolute
        // gradient tolerance sits below what step halving can distinguish in
        // floating point, so the step length is the honest criterion.
        if (d.norm() <= opts.step_tol * (1.0 + res.x.norm())) {
            res.converged = true;
            break;
        }

        // Step halving until the objective improves.
        double step = 1.0;
        Eigen::VectorXd x_new;
        double v_new = -std::numeric_limits<double>::infinity();
        for (int halvings = 0; halvings < 40; ++halvings, step /= 2) {
            x_new = res.x + step * d;
            for (int i = 0; i < x_new.size(); ++i)
                x_new[i] = std::clamp(x_new[i], -opts.param_cap, opts.param_cap);
            v_new = f(x_new);
            if (std::isfinite(v_new) && v_new >= res.value) break;
        }
        if (!(v_new >= res.value)) break;  // no improvement possible
        if ((x_new - res.x).norm() == 0.0) break;
        res.x = x_new;
        res.value = v_new;
    }

    for (int i = 0; i < res.x.size(); ++i)
        if (std::abs(std::abs(res.x[i]) - opts.param_cap) < 1e-12) res.capped = true;
    return res;
}

}  // namespace hypoforge
