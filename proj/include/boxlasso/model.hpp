#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "boxlasso/errors.hpp"
#include "boxlasso/matrix.hpp"

namespace boxlasso {

/// Box-constrained least-squares instance:
///   minimize ||Ax - b||^2  subject to |x_j| <= tau_j.
/// tau_j = 0 is legal; every consumer eliminates those coordinates
/// instead of rejecting the problem.
struct Problem {
    DenseMatrix a;
    Vector b;
    Vector tau;

    Problem(DenseMatrix a_, Vector b_, Vector tau_)
        : a(std::move(a_)), b(std::move(b_)), tau(std::move(tau_)) {
        if (b.size() != a.rows())
            throw InvalidInput("Problem: b has length " + std::to_string(b.size()) +
                               ", expected rows = " + std::to_string(a.rows()));
        if (tau.size() != a.cols())
            throw InvalidInput("Problem: tau has length " + std::to_string(tau.size()) +
                               ", expected cols = " + std::to_string(a.cols()));
        if (!all_finite(b)) throw InvalidInput("Problem: b must be finite");
        for (std::size_t j = 0; j < tau.size(); ++j)
            if (!(tau[j] >= 0.0) || !std::isfinite(tau[j]))
                throw InvalidInput("Problem: tau[" + std::to_string(j) + "] must be >= 0 and finite");
    }

    std::size_t m() const { return a.rows(); }
    std::size_t n() const { return a.cols(); }
};

/// Nonnegative per-coordinate weights for the l1 penalty.
struct Multipliers {
    Vector lambda;

    explicit Multipliers(Vector lambda_) : lambda(std::move(lambda_)) {
        for (std::size_t j = 0; j < lambda.size(); ++j)
            if (!(lambda[j] >= 0.0) || !std::isfinite(lambda[j]))
                throw InvalidInput("Multipliers: lambda[" + std::to_string(j) +
                                   "] must be >= 0 and finite");
    }

    std::size_t size() const { return lambda.size(); }
};

/// Diagonal +-1 matrix stored as its sign vector. S*S = I.
struct Signature {
    std::vector<int> signs;

    explicit Signature(std::vector<int> signs_) : signs(std::move(signs_)) {
        for (std::size_t j = 0; j < signs.size(); ++j)
            if (signs[j] != 1 && signs[j] != -1)
                throw InvalidInput("Signature: signs[" + std::to_string(j) + "] must be +1 or -1");
    }

    static Signature identity(std::size_t n) { return Signature(std::vector<int>(n, 1)); }

    std::size_t size() const { return signs.size(); }

    Vector apply(const Vector& x) const {
        if (x.size() != signs.size()) throw InvalidInput("Signature: dimension mismatch");
        Vector y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = signs[j] > 0 ? x[j] : -x[j];
        return y;
    }
};

struct SolveResult {
    Vector x;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double tolerance_used = 0.0;
};

/// ||Ax - b||^2 (no 1/2 factor anywhere in this library).
inline double box_objective(const DenseMatrix& a, const Vector& b, const Vector& x) {
    Vector r = a.mul(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = r[i] - b[i];
        acc += d * d;
    }
    return acc;
}

/// ||Ax - b||^2 + sum_j lambda_j |x_j|
inline double lasso_objective(const DenseMatrix& a, const Vector& b, const Multipliers& lam,
                              const Vector& x) {
    if (lam.size() != x.size()) throw InvalidInput("lasso_objective: dimension mismatch");
    double acc = box_objective(a, b, x);
    for (std::size_t j = 0; j < x.size(); ++j) acc += lam.lambda[j] * std::fabs(x[j]);
    return acc;
}

/// ||Ax - b||^2 + sum_j lambda_j x_j^2
inline double tikhonov_objective(const DenseMatrix& a, const Vector& b, const Multipliers& lam,
                                 const Vector& x) {
    if (lam.size() != x.size()) throw InvalidInput("tikhonov_objective: dimension mismatch");
    double acc = box_objective(a, b, x);
    for (std::size_t j = 0; j < x.size(); ++j) acc += lam.lambda[j] * x[j] * x[j];
    return acc;
}

/// |x_j| <= tau_j + tol for all j.
inline bool is_feasible(const Problem& p, const Vector& x, double tol) {
    if (x.size() != p.n()) throw InvalidInput("is_feasible: x has wrong length");
    if (tol < 0.0) throw InvalidInput("is_feasible: tol must be >= 0");
    for (std::size_t j = 0; j < x.size(); ++j)
        if (std::fabs(x[j]) > p.tau[j] + tol) return false;
    return true;
}

/// Coordinatewise projection onto the box [-tau, tau].
inline Vector clamp_to_box(const Vector& x, const Vector& tau) {
    Vector y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        y[j] = std::min(tau[j], std::max(-tau[j], x[j]));
    return y;
}

} // namespace boxlasso
