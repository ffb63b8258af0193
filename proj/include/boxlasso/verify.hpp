#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "boxlasso/errors.hpp"
#include "boxlasso/matrix.hpp"
#include "boxlasso/model.hpp"
#include "boxlasso/multipliers.hpp"
#include "boxlasso/solvers.hpp"

namespace boxlasso {

struct VerifyReport {
    double p_star = 0.0;     // constrained optimum
    double dual_value = 0.0; // H(lambda)
    double gap = 0.0;        // p_star - dual_value, >= 0 up to numerics
    Vector kkt_residuals;
    double max_kkt_residual = 0.0;
    Vector x_constrained;
    Vector x_penalized;
    /// May be false even when equivalence holds: the penalized problem
    /// can have multiple minimizers. max_kkt_residual at x_constrained is
    /// the authoritative certificate.
    bool solutions_close = false;
};

/// L(x, lambda) = ||Ax - b||^2 + sum_j lambda_j (|x_j| - tau_j)
inline double lagrangian(const Problem& p, const Vector& x, const Multipliers& lam) {
    if (x.size() != p.n() || lam.size() != p.n())
        throw InvalidInput("lagrangian: dimension mismatch");
    double acc = box_objective(p.a, p.b, x);
    for (std::size_t j = 0; j < p.n(); ++j) acc += lam.lambda[j] * (std::fabs(x[j]) - p.tau[j]);
    return acc;
}

/// Lagrange dual H(lambda) = min_x L(x, lambda)
///   = [min_x ||Ax-b||^2 + sum lambda_j |x_j|] - sum_j lambda_j tau_j.
inline double dual_value(const Problem& p, const Multipliers& lam, const SolverConfig& cfg = {}) {
    if (lam.size() != p.n()) throw InvalidInput("dual_value: dimension mismatch");
    const SolveResult r = solve_weighted_lasso(p.a, p.b, lam, cfg);
    if (!r.converged)
        throw SolverFailure("dual_value: weighted-lasso solver did not converge");
    double acc = r.objective;
    for (std::size_t j = 0; j < p.n(); ++j) acc -= lam.lambda[j] * p.tau[j];
    return acc;
}

/// Per-coordinate distance of 0 from the subdifferential of the penalized
/// objective at x. With g_j = 2 <a_j, Ax - b>:
///   |x_j| >  zero_tol:  |g_j + lambda_j sign(x_j)|
///   |x_j| <= zero_tol:  max(|g_j| - lambda_j, 0)
/// A zero vector certifies first-order optimality of x for the penalized
/// problem.
inline Vector kkt_residuals(const DenseMatrix& a, const Vector& b, const Multipliers& lam,
                            const Vector& x, double zero_tol = 1e-8) {
    if (x.size() != a.cols() || lam.size() != a.cols() || b.size() != a.rows())
        throw InvalidInput("kkt_residuals: dimension mismatch");
    Vector r = a.mul(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    Vector grad = a.tmul(r);
    Vector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double g = 2.0 * grad[j];
        if (std::fabs(x[j]) > zero_tol)
            out[j] = std::fabs(g + (x[j] > 0.0 ? lam.lambda[j] : -lam.lambda[j]));
        else
            out[j] = std::max(std::fabs(g) - lam.lambda[j], 0.0);
    }
    return out;
}

/// Solves the constrained and the penalized problem and reports duality
/// gap, KKT residuals at the constrained solution, and whether the two
/// minimizers coincide.
inline VerifyReport verify_equivalence(const Problem& p, const Multipliers& lam,
                                       const SolverConfig& cfg = {}) {
    if (lam.size() != p.n()) throw InvalidInput("verify_equivalence: dimension mismatch");

    const SolveResult constrained = solve_box_ls(p, cfg);
    if (!constrained.converged)
        throw SolverFailure("verify_equivalence: box solver did not converge");
    const SolveResult penalized = solve_weighted_lasso(p.a, p.b, lam, cfg);
    if (!penalized.converged)
        throw SolverFailure("verify_equivalence: weighted-lasso solver did not converge");

    VerifyReport rep;
    rep.p_star = constrained.objective;
    rep.x_constrained = constrained.x;
    rep.x_penalized = penalized.x;
    rep.dual_value = penalized.objective;
    for (std::size_t j = 0; j < p.n(); ++j) rep.dual_value -= lam.lambda[j] * p.tau[j];
    rep.gap = rep.p_star - rep.dual_value;
    rep.kkt_residuals = kkt_residuals(p.a, p.b, lam, rep.x_constrained);
    rep.max_kkt_residual = inf_norm(rep.kkt_residuals);

    double diff = 0.0;
    for (std::size_t j = 0; j < p.n(); ++j)
        diff = std::max(diff, std::fabs(rep.x_constrained[j] - rep.x_penalized[j]));
    rep.solutions_close = diff <= 1e-5;
    return rep;
}

inline VerifyReport verify_equivalence(const Problem& p, const MultiplierResult& result,
                                       const SolverConfig& cfg = {}) {
    return verify_equivalence(p, result.lambda, cfg);
}

} // namespace boxlasso
