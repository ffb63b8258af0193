#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "boxlasso/errors.hpp"
#include "boxlasso/matrix.hpp"
#include "boxlasso/model.hpp"

namespace boxlasso {

struct SolverConfig {
    int max_iters = 100000;
    /// Applies to both the successive-iterate infinity-norm change and
    /// the first-order (KKT) residual.
    double tol = 1e-10;
    /// Backtracking factor for the projected-gradient line search.
    double step_shrink = 0.5;
    /// Optional per-sweep observer for the coordinate-descent solver:
    /// called with (sweep index, objective after the sweep).
    std::function<void(int, double)> on_sweep;

    void validate() const {
        if (max_iters < 1) throw InvalidInput("SolverConfig: max_iters must be >= 1");
        if (!(tol > 0.0)) throw InvalidInput("SolverConfig: tol must be > 0");
        if (!(step_shrink > 0.0 && step_shrink < 1.0))
            throw InvalidInput("SolverConfig: step_shrink must be in (0,1)");
    }
};

namespace detail {

/// First-order residual of min ||Ax-b||^2 over the box, at a point x that
/// lies exactly in the box (projection output). grad = 2 A^T (Ax - b).
inline double box_kkt_residual(const Vector& x, const Vector& grad, const Vector& tau) {
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double r;
        if (tau[j] == 0.0)
            r = 0.0; // pinned coordinate, no feasible direction
        else if (x[j] >= tau[j])
            r = std::max(grad[j], 0.0);
        else if (x[j] <= -tau[j])
            r = std::max(-grad[j], 0.0);
        else
            r = std::fabs(grad[j]);
        worst = std::max(worst, r);
    }
    return worst;
}

inline double soft_threshold(double v, double theta) {
    const double mag = std::fabs(v) - theta;
    if (mag <= 0.0) return 0.0; // ties at the kink resolve to 0
    return v > 0.0 ? mag : -mag;
}

} // namespace detail

/// Projected gradient with backtracking line search for
///   minimize ||Ax - b||^2  subject to |x_j| <= tau_j.
/// The projection (coordinatewise clamp) is the last operation of every
/// iteration, so the returned x is feasible exactly; tau_j = 0 coordinates
/// are pinned to zero by the same clamp. A step is accepted when
///   ||A d||^2 <= ||d||^2 / (2 t),   d = clamp(x - t grad) - x,
/// which for this quadratic objective guarantees
///   f(x + d) <= f(x) - ||d||^2 / (2 t).
inline SolveResult solve_box_ls(const Problem& p, const SolverConfig& cfg = {}) {
    cfg.validate();
    const std::size_t n = p.n();

    SolveResult out;
    out.tolerance_used = cfg.tol;
    Vector x(n, 0.0); // feasible for every box
    Vector r = p.a.mul(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];

    double step = 1.0;

    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        if ((iter & 1023) == 1023) {
            // Periodic residual refresh against accumulation drift.
            r = p.a.mul(x);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];
        }
        Vector grad = p.a.tmul(r);
        for (double& g : grad) g *= 2.0;

        if (detail::box_kkt_residual(x, grad, p.tau) <= cfg.tol) {
            out.converged = true;
            break;
        }

        // Backtracking on the projected step.
        Vector y(n), d(n), ad;
        double d_norm_sq = 0.0;
        for (;;) {
            d_norm_sq = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double cand = x[j] - step * grad[j];
                y[j] = std::min(p.tau[j], std::max(-p.tau[j], cand));
                d[j] = y[j] - x[j];
                d_norm_sq += d[j] * d[j];
            }
            if (d_norm_sq == 0.0) break;
            ad = p.a.mul(d);
            if (norm_sq(ad) <= 0.5 / step * d_norm_sq) break;
            step *= cfg.step_shrink;
        }
        if (d_norm_sq == 0.0) {
            // The clamp swallowed the whole step, so the step has
            // underflowed against the active bounds; regrow it.
            step /= cfg.step_shrink;
            continue;
        }

        x = y;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += ad[i];
        step *= 2.0; // let the accepted step grow back between iterations
    }

    out.x = std::move(x);
    out.iterations = iter;
    out.objective = box_objective(p.a, p.b, out.x);
    return out;
}

/// Cyclic coordinate descent for
///   minimize ||Ax - b||^2 + sum_j lambda_j |x_j|.
/// Exact per-coordinate update: x_j <- soft(rho_j, lambda_j/2) / ||a_j||^2
/// with rho_j = <a_j, b - sum_{k != j} a_k x_k>. Columns with ||a_j|| = 0
/// keep x_j = 0 (the coordinate is objective-indifferent when lambda_j = 0
/// and must vanish when lambda_j > 0). The objective is nonincreasing
/// across sweeps; stops when the largest coordinate change in a sweep is
/// <= tol.
inline SolveResult solve_weighted_lasso(const DenseMatrix& a, const Vector& b,
                                        const Multipliers& lam, const SolverConfig& cfg = {}) {
    cfg.validate();
    if (b.size() != a.rows()) throw InvalidInput("solve_weighted_lasso: b length mismatch");
    if (lam.size() != a.cols()) throw InvalidInput("solve_weighted_lasso: lambda length mismatch");
    const std::size_t n = a.cols();
    const std::size_t m = a.rows();

    Vector col_norm_sq(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) col_norm_sq[j] = a.gram_entry(j, j);

    SolveResult out;
    out.tolerance_used = cfg.tol;
    Vector x(n, 0.0);
    Vector res = b; // res = b - A x

    double prev_obj = lasso_objective(a, b, lam, x);
    int sweep = 0;
    for (; sweep < cfg.max_iters; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (col_norm_sq[j] == 0.0) {
                x[j] = 0.0;
                continue;
            }
            double rho = col_norm_sq[j] * x[j];
            for (std::size_t i = 0; i < m; ++i) rho += a(i, j) * res[i];
            const double xj_new = detail::soft_threshold(rho, lam.lambda[j] / 2.0) / col_norm_sq[j];
            const double delta = xj_new - x[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < m; ++i) res[i] -= a(i, j) * delta;
                x[j] = xj_new;
            }
            max_change = std::max(max_change, std::fabs(delta));
        }

        // Refresh the residual at sweep boundaries to stop drift.
        res = b;
        {
            Vector ax = a.mul(x);
            for (std::size_t i = 0; i < m; ++i) res[i] -= ax[i];
        }
        double obj = norm_sq(res);
        for (std::size_t j = 0; j < n; ++j) obj += lam.lambda[j] * std::fabs(x[j]);
        if (obj > prev_obj + 1e-9 * (1.0 + std::fabs(prev_obj)))
            throw SolverFailure("solve_weighted_lasso: objective increased across a sweep");
        prev_obj = obj;
        if (cfg.on_sweep) cfg.on_sweep(sweep, obj);

        if (max_change <= cfg.tol) {
            out.converged = true;
            ++sweep;
            break;
        }
    }

    out.x = std::move(x);
    out.iterations = sweep;
    out.objective = lasso_objective(a, b, lam, out.x);
    return out;
}

namespace detail {

/// In-place lower Cholesky of a symmetric matrix given as full storage.
/// Throws SingularSystem when a pivot falls at or below
/// 1e-14 * (largest diagonal entry).
inline void cholesky_factor(DenseMatrix& mat) {
    const std::size_t n = mat.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, mat(i, i));
    const double pivot_floor = 1e-14 * max_diag;

    for (std::size_t k = 0; k < n; ++k) {
        double pivot = mat(k, k);
        for (std::size_t s = 0; s < k; ++s) pivot -= mat.at(k, s) * mat.at(k, s);
        if (pivot <= pivot_floor)
            throw SingularSystem("cholesky: pivot " + std::to_string(pivot) + " at column " +
                                 std::to_string(k) + " is not positive");
        const double l = std::sqrt(pivot);
        mat.at(k, k) = l;
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = mat(i, k);
            for (std::size_t s = 0; s < k; ++s) v -= mat.at(i, s) * mat.at(k, s);
            mat.at(i, k) = v / l;
        }
    }
}

inline Vector cholesky_solve(const DenseMatrix& l, const Vector& rhs) {
    const std::size_t n = l.rows();
    Vector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = rhs[i];
        for (std::size_t s = 0; s < i; ++s) v -= l(i, s) * y[s];
        y[i] = v / l(i, i);
    }
    Vector z(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double v = y[ii];
        for (std::size_t s = ii + 1; s < n; ++s) v -= l(s, ii) * z[s];
        z[ii] = v / l(ii, ii);
    }
    return z;
}

} // namespace detail

/// Solve mat * y = rhs for symmetric positive definite mat by dense
/// Cholesky, with one iterative-refinement pass. The residual contract is
/// ||mat y - rhs||_inf <= 1e-10 (1 + ||rhs||_inf).
inline Vector dense_spd_solve(const DenseMatrix& mat, const Vector& rhs) {
    const std::size_t n = mat.rows();
    if (mat.cols() != n) throw InvalidInput("dense_spd_solve: matrix must be square");
    if (rhs.size() != n) throw InvalidInput("dense_spd_solve: rhs length mismatch");

    double scale = 0.0;
    for (double v : mat.entries()) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(mat(i, j) - mat(j, i)) > 1e-12 * std::max(1.0, scale))
                throw InvalidInput("dense_spd_solve: matrix is not symmetric at (" +
                                   std::to_string(i) + "," + std::to_string(j) + ")");

    DenseMatrix l = mat;
    detail::cholesky_factor(l);
    Vector y = detail::cholesky_solve(l, rhs);

    // One refinement pass tightens the residual on mildly conditioned systems.
    Vector r = mat.mul(y);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
    if (inf_norm(r) > 0.0) {
        Vector corr = detail::cholesky_solve(l, r);
        for (std::size_t i = 0; i < n; ++i) y[i] += corr[i];
    }
    return y;
}

/// Closed-form solve of
///   minimize ||Ax - b||^2 + sum_j lambda_j x_j^2
/// via the normal equations (A^T A + diag(lambda)) x = A^T b.
inline Vector solve_weighted_tikhonov(const DenseMatrix& a, const Vector& b,
                                      const Multipliers& lam) {
    if (b.size() != a.rows()) throw InvalidInput("solve_weighted_tikhonov: b length mismatch");
    if (lam.size() != a.cols())
        throw InvalidInput("solve_weighted_tikhonov: lambda length mismatch");
    const std::size_t n = a.cols();

    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = a.gram_entry(i, j);
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    for (std::size_t j = 0; j < n; ++j) g.at(j, j) += lam.lambda[j];

    return dense_spd_solve(g, a.tmul(b));
}

} // namespace boxlasso
