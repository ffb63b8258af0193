// Test-only oracles: brute-force grid searches and instance generators,
// kept independent of the implementation paths they check.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "boxlasso/denoise.hpp"
#include "boxlasso/matrix.hpp"
#include "boxlasso/model.hpp"
#include "boxlasso/solvers.hpp"

namespace oracles {

using boxlasso::DenseMatrix;
using boxlasso::Problem;
using boxlasso::Vector;

/// Argmin of f over { lo + k step : lo + k step <= hi }.
template <typename F>
double grid_argmin(F&& f, double lo, double hi, double step) {
    double best_x = lo;
    double best_f = f(lo);
    const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 1; k <= count; ++k) {
        const double x = lo + static_cast<double>(k) * step;
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }
    return best_x;
}

template <typename F>
double grid_min(F&& f, double lo, double hi, double step) {
    return f(grid_argmin(f, lo, hi, step));
}

/// Argmin of (a x - b)^2 + lambda |x| over a 1-D grid.
inline double penalized_scalar_argmin(double a, double b, double lambda, double lo = -10.0,
                                      double hi = 10.0, double step = 1e-5) {
    double best_x = lo;
    double best_f = std::numeric_limits<double>::infinity();
    const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long k = 0; k <= count; ++k) {
        const double x = lo + static_cast<double>(k) * step;
        const double t = a * x - b;
        const double v = t * t + lambda * std::fabs(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }
    return best_x;
}

/// Exhaustive minimum of ||Ax - b||^2 over the box, on a per-coordinate
/// grid of at most `step`-sized cells that includes both endpoints.
/// Intended for n <= 3.
inline double box_grid_min(const Problem& p, double step) {
    const std::size_t n = p.n();
    const std::size_t m = p.m();
    std::vector<std::vector<double>> axis(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double span = 2.0 * p.tau[j];
        const std::size_t cells =
            span == 0.0 ? 1 : static_cast<std::size_t>(std::ceil(span / step));
        for (std::size_t t = 0; t <= cells; ++t)
            axis[j].push_back(-p.tau[j] + span * static_cast<double>(t) /
                                              static_cast<double>(cells));
        if (span == 0.0) axis[j] = {0.0};
    }

    std::vector<Vector> partial(n + 1, Vector(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) partial[0][i] = -p.b[i];

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(n, 0);
    std::size_t depth = 0;
    for (;;) {
        if (depth == n) {
            best = std::min(best, boxlasso::norm_sq(partial[n]));
            if (n == 0) break;
            --depth;
            ++idx[depth];
        }
        while (idx[depth] >= axis[depth].size()) {
            if (depth == 0) return best;
            idx[depth] = 0;
            --depth;
            ++idx[depth];
        }
        const double xj = axis[depth][idx[depth]];
        for (std::size_t i = 0; i < m; ++i)
            partial[depth + 1][i] = partial[depth][i] + p.a(i, depth) * xj;
        ++depth;
        if (n == 0) break;
    }
    return best;
}

/// min over the grid of Q(u) = prod [-tau_j, u_j] of
///   h_G(v) = min_S ||A S (v + tau) - b||^2.
/// The signature choice folds into the same recursion: each coordinate
/// contributes s_j w_j a_j with w_j = v_j + tau_j >= 0 swept over a grid
/// with both endpoints included and cell size <= step.
inline double hg_grid_min(const Problem& p, const Vector& u, double step) {
    const std::size_t n = p.n();
    const std::size_t m = p.m();
    std::vector<std::vector<double>> axis(n); // values of w_j = v_j + tau_j
    for (std::size_t j = 0; j < n; ++j) {
        const double span = u[j] + p.tau[j];
        if (span <= 0.0) {
            axis[j] = {0.0};
            continue;
        }
        const std::size_t cells = static_cast<std::size_t>(std::ceil(span / step));
        for (std::size_t t = 0; t <= cells; ++t)
            axis[j].push_back(span * static_cast<double>(t) / static_cast<double>(cells));
    }

    std::vector<Vector> partial(n + 1, Vector(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) partial[0][i] = -p.b[i];

    double best = std::numeric_limits<double>::infinity();
    // Per depth: which grid value and which sign (0 -> +, 1 -> -).
    std::vector<std::size_t> idx(n, 0);
    std::vector<int> sign(n, 0);

    std::size_t depth = 0;
    if (n == 0) return boxlasso::norm_sq(partial[0]);
    for (;;) {
        if (depth == n) {
            best = std::min(best, boxlasso::norm_sq(partial[n]));
            --depth;
            // advance: sign first, then grid index
            for (;;) {
                if (sign[depth] == 0 && axis[depth][idx[depth]] != 0.0) {
                    sign[depth] = 1;
                    break;
                }
                sign[depth] = 0;
                ++idx[depth];
                if (idx[depth] < axis[depth].size()) break;
                idx[depth] = 0;
                if (depth == 0) return best;
                --depth;
            }
        }
        const double w = axis[depth][idx[depth]];
        const double signed_w = sign[depth] ? -w : w;
        for (std::size_t i = 0; i < m; ++i)
            partial[depth + 1][i] = partial[depth][i] + p.a(i, depth) * signed_w;
        ++depth;
    }
}

// ---------------------------------------------------------------------
// Deterministic random-instance builders for test sweeps.

struct TestRng {
    std::mt19937_64 eng;

    explicit TestRng(std::uint64_t seed) : eng(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng);
    }
    std::size_t index(std::size_t lo, std::size_t hi) { // inclusive
        return std::uniform_int_distribution<std::size_t>(lo, hi)(eng);
    }
};

inline DenseMatrix random_matrix(TestRng& rng, std::size_t m, std::size_t n, double lo,
                                 double hi) {
    DenseMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a.at(i, j) = rng.uniform(lo, hi);
    return a;
}

inline Vector random_vector(TestRng& rng, std::size_t n, double lo, double hi) {
    Vector v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

/// Scaled rows of the orthonormal DCT give exactly orthogonal columns.
/// With in_span = true, b is drawn from the column span (the setting of
/// the diagonal closed forms for g and p*); otherwise b is free.
inline Problem random_diagonal_problem(TestRng& rng, std::size_t n, std::size_t m, bool in_span,
                                       double tau_lo = 0.05, double tau_hi = 2.0) {
    const DenseMatrix dct = boxlasso::dct2_matrix(m);
    DenseMatrix a(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double scale = (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
        for (std::size_t i = 0; i < m; ++i) a.at(i, j) = scale * dct(j, i);
    }
    Vector b(m, 0.0);
    if (in_span) {
        const Vector y = random_vector(rng, n, -3.0, 3.0);
        b = a.mul(y);
    } else {
        b = random_vector(rng, m, -3.0, 3.0);
    }
    return Problem(std::move(a), std::move(b), random_vector(rng, n, tau_lo, tau_hi));
}

bool spectral_condition_below(const DenseMatrix& a, double kappa_max);

/// Full-column-rank A with b arranged so that every corner margin of the
/// gradient-sign condition equals a drawn positive slack. Badly
/// conditioned draws are rejected so the iterative solvers stay within
/// their budgets; the closed form itself needs no such restriction.
inline Problem random_gradient_sign_problem(TestRng& rng, std::size_t n, std::size_t m) {
    for (;;) {
        DenseMatrix a = random_matrix(rng, m, n, -1.0, 1.0);
        if (!spectral_condition_below(a, 50.0)) continue;
        Vector tau = random_vector(rng, n, 0.1, 1.0);
        DenseMatrix gram(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const double v = a.gram_entry(i, j);
                gram.at(i, j) = v;
                gram.at(j, i) = v;
            }
        Vector s(n);
        for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += tau[j] * std::fabs(gram(j, k));
            s[k] = acc + rng.uniform(0.1, 1.0);
        }
        try {
            const Vector y = boxlasso::dense_spd_solve(gram, s);
            return Problem(a, a.mul(y), tau);
        } catch (const boxlasso::SingularSystem&) {
            continue;
        }
    }
}

/// Rough conditioning filter: ratio of extreme Cholesky pivots of A^T A.
/// Returns false for rank-deficient draws.
inline bool gram_condition_below(const DenseMatrix& a, double max_pivot_ratio) {
    const std::size_t n = a.cols();
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = a.gram_entry(i, j);
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    try {
        boxlasso::detail::cholesky_factor(g);
    } catch (const boxlasso::SingularSystem&) {
        return false;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        lo = std::min(lo, g(k, k));
        hi = std::max(hi, g(k, k));
    }
    if (n == 0) return true;
    return hi * hi <= max_pivot_ratio * lo * lo;
}

/// Accurate conditioning filter: kappa(A) = sqrt(lmax(G)/lmin(G)) with the
/// extreme eigenvalues of G = A^T A from power and inverse-power iteration.
inline bool spectral_condition_below(const DenseMatrix& a, double kappa_max) {
    const std::size_t n = a.cols();
    if (n == 0) return true;
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = a.gram_entry(i, j);
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    DenseMatrix chol = g;
    try {
        boxlasso::detail::cholesky_factor(chol);
    } catch (const boxlasso::SingularSystem&) {
        return false;
    }

    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 + 0.01 * static_cast<double>(j);
    double lmax = 0.0;
    for (int it = 0; it < 60; ++it) {
        Vector w = g.mul(v);
        const double norm = std::sqrt(boxlasso::norm_sq(w));
        if (norm == 0.0) return false;
        for (double& x : w) x /= norm;
        lmax = norm;
        v = std::move(w);
    }
    for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 + 0.01 * static_cast<double>(j);
    double inv_growth = 0.0;
    for (int it = 0; it < 60; ++it) {
        Vector w = boxlasso::detail::cholesky_solve(chol, v);
        const double norm = std::sqrt(boxlasso::norm_sq(w));
        if (norm == 0.0) return false;
        for (double& x : w) x /= norm;
        inv_growth = norm;
        v = std::move(w);
    }
    const double lmin = 1.0 / inv_growth;
    return lmax <= kappa_max * kappa_max * lmin;
}

} // namespace oracles
