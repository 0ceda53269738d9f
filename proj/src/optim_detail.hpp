#pragma once

// Internal derivative-free optimization helpers for the shaper: a budgeted
// Nelder-Mead simplex and a damped Gauss-Newton root finder for equality
// constraints (minimal-norm updates, finite-difference Jacobian).

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace scqc::detail {

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;
using ConstraintFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct NelderMeadResult {
    Eigen::VectorXd best;
    double best_value = 0.0;
    long evals = 0;
    // (eval count, value) at each improvement of the incumbent
    std::vector<std::pair<long, double>> improvements;
};

inline NelderMeadResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& x0,
                                    double step, long max_evals) {
    const int d = static_cast<int>(x0.size());
    NelderMeadResult res;
    res.evals = 0;

    std::vector<Eigen::VectorXd> pts(d + 1, x0);
    std::vector<double> vals(d + 1);
    for (int i = 1; i <= d; ++i) pts[i](i - 1) += step;
    for (int i = 0; i <= d; ++i) {
        vals[i] = f(pts[i]);
        ++res.evals;
    }

    auto order = [&]() {
        std::vector<int> idx(d + 1);
        for (int i = 0; i <= d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        std::vector<Eigen::VectorXd> p2(d + 1);
        std::vector<double> v2(d + 1);
        for (int i = 0; i <= d; ++i) { p2[i] = pts[idx[i]]; v2[i] = vals[idx[i]]; }
        pts.swap(p2);
        vals.swap(v2);
    };
    order();
    double incumbent = vals[0];
    res.improvements.push_back({res.evals, incumbent});

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    while (res.evals < max_evals) {
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (int i = 0; i < d; ++i) centroid += pts[i];
        centroid /= d;

        const Eigen::VectorXd xr = centroid + alpha * (centroid - pts[d]);
        const double fr = f(xr);
        ++res.evals;
        if (fr < vals[0]) {
            const Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
            const double fe = f(xe);
            ++res.evals;
            if (fe < fr) { pts[d] = xe; vals[d] = fe; }
            else { pts[d] = xr; vals[d] = fr; }
        } else if (fr < vals[d - 1]) {
            pts[d] = xr;
            vals[d] = fr;
        } else {
            const Eigen::VectorXd xc = centroid + rho * (pts[d] - centroid);
            const double fc = f(xc);
            ++res.evals;
            if (fc < vals[d]) { pts[d] = xc; vals[d] = fc; }
            else {
                for (int i = 1; i <= d && res.evals < max_evals; ++i) {
                    pts[i] = pts[0] + sigma * (pts[i] - pts[0]);
                    vals[i] = f(pts[i]);
                    ++res.evals;
                }
            }
        }
        order();
        if (vals[0] < incumbent - 1e-15) {
            incumbent = vals[0];
            res.improvements.push_back({res.evals, incumbent});
        }
        // converged simplex: spread in values and points both tiny
        if (vals[d] - vals[0] < 1e-14 && (pts[d] - pts[0]).norm() < 1e-12) break;
    }
    res.best = pts[0];
    res.best_value = vals[0];
    return res;
}

struct GaussNewtonResult {
    Eigen::VectorXd x;
    Eigen::VectorXd residual;
    long evals = 0;
    bool converged = false;
};

// Solve c(x) = 0 by damped Gauss-Newton with minimal-norm steps,
// dx = -J^T (J J^T + lambda I)^{-1} c, central-difference Jacobian.
inline GaussNewtonResult gauss_newton(const ConstraintFn& c, Eigen::VectorXd x, double tol,
                                      int max_iters, double fd_step, long* eval_counter = nullptr,
                                      long eval_limit = -1) {
    GaussNewtonResult res;
    auto count = [&](long n) {
        res.evals += n;
        if (eval_counter) *eval_counter += n;
    };
    Eigen::VectorXd cx = c(x);
    count(1);
    const int m = static_cast<int>(cx.size());
    const int d = static_cast<int>(x.size());

    for (int iter = 0; iter < max_iters; ++iter) {
        if (cx.norm() <= tol) { res.converged = true; break; }
        if (eval_limit >= 0 && eval_counter && *eval_counter >= eval_limit) break;

        Eigen::MatrixXd jac(m, d);
        for (int j = 0; j < d; ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp(j) += fd_step;
            xm(j) -= fd_step;
            jac.col(j) = (c(xp) - c(xm)) / (2.0 * fd_step);
            count(2);
        }

        double lambda = 1e-12;
        bool improved = false;
        for (int attempt = 0; attempt < 8 && !improved; ++attempt) {
            const Eigen::MatrixXd jjt =
                jac * jac.transpose() + lambda * Eigen::MatrixXd::Identity(m, m);
            const Eigen::VectorXd dx = -jac.transpose() * jjt.ldlt().solve(cx);
            const Eigen::VectorXd xn = x + dx;
            const Eigen::VectorXd cn = c(xn);
            count(1);
            if (cn.norm() < cx.norm()) {
                x = xn;
                cx = cn;
                improved = true;
            } else {
                lambda = (lambda == 1e-12) ? 1e-6 : lambda * 100.0;
            }
        }
        if (!improved) break;
    }
    if (cx.norm() <= tol) res.converged = true;
    res.x = x;
    res.residual = cx;
    return res;
}

} // namespace scqc::detail
