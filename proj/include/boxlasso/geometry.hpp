#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "boxlasso/errors.hpp"
#include "boxlasso/matrix.hpp"
#include "boxlasso/model.hpp"
#include "boxlasso/solvers.hpp"

namespace boxlasso {

namespace detail {

struct GramDiagnostic {
    double worst_ratio = 0.0;
    std::size_t worst_i = 0, worst_j = 0;
};

/// Worst relative off-diagonal Gram ratio |<a_i,a_j>| / (||a_i|| ||a_j||)
/// over pairs of nonzero columns; 0 when there is no such pair.
inline GramDiagnostic gram_off_diagonal(const DenseMatrix& a) {
    GramDiagnostic d;
    const std::size_t n = a.cols();
    Vector norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(a.gram_entry(j, j));
    for (std::size_t i = 0; i < n; ++i) {
        if (norms[i] == 0.0) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (norms[j] == 0.0) continue;
            const double ratio = std::fabs(a.gram_entry(i, j)) / (norms[i] * norms[j]);
            if (ratio > d.worst_ratio) d = GramDiagnostic{ratio, i, j};
        }
    }
    return d;
}

} // namespace detail

/// Decoupled description of the value function for diagonal-Gram designs:
/// per coordinate, g is a parabola branch with vertex c_j and curvature
/// ||a_j||^2, flat past c_j. Valid as written when b lies in the column
/// span (the vertex height is zero there); gradients, and hence the
/// multipliers, do not depend on that restriction.
struct DiagonalGeometry {
    Vector c;            // c_j = -tau_j + |<b,a_j>| / ||a_j||^2
    Vector col_norms_sq; // ||a_j||^2, all > 0
    Vector tau;
};

inline DiagonalGeometry make_diagonal_geometry(const Problem& p, double diag_tol = 1e-10) {
    const auto diag = detail::gram_off_diagonal(p.a);
    if (diag.worst_ratio > diag_tol)
        throw Inapplicable("make_diagonal_geometry: Gram matrix is not diagonal; worst pair (" +
                               std::to_string(diag.worst_i) + "," + std::to_string(diag.worst_j) +
                               ") has relative magnitude " + std::to_string(diag.worst_ratio),
                           diag_tol - diag.worst_ratio);

    const std::size_t n = p.n();
    DiagonalGeometry geo;
    geo.c.resize(n);
    geo.col_norms_sq.resize(n);
    geo.tau = p.tau;
    for (std::size_t j = 0; j < n; ++j) {
        const double ns = p.a.gram_entry(j, j);
        if (ns == 0.0)
            throw InvalidInput("make_diagonal_geometry: column " + std::to_string(j) +
                               " is zero; eliminate it before building the geometry");
        geo.col_norms_sq[j] = ns;
        geo.c[j] = -p.tau[j] + std::fabs(dot(p.b, p.a.column(j))) / ns;
    }
    return geo;
}

/// True when the diagonal closed forms reproduce g for this problem:
/// diagonal Gram, no zero columns, and b inside the column span.
inline bool diagonal_geometry_applicable(const Problem& p, double diag_tol = 1e-10) {
    if (detail::gram_off_diagonal(p.a).worst_ratio > diag_tol) return false;
    Vector proj(p.m(), 0.0);
    for (std::size_t j = 0; j < p.n(); ++j) {
        const double ns = p.a.gram_entry(j, j);
        if (ns == 0.0) return false;
        const Vector col = p.a.column(j);
        const double beta = dot(p.b, col) / ns;
        for (std::size_t i = 0; i < p.m(); ++i) proj[i] += beta * col[i];
    }
    double resid = 0.0;
    for (std::size_t i = 0; i < p.m(); ++i) {
        const double d = p.b[i] - proj[i];
        resid += d * d;
    }
    return std::sqrt(resid) <= 1e-8 * (1.0 + std::sqrt(norm_sq(p.b)));
}

namespace detail {

inline void check_g_domain(const Vector& u, const Vector& tau, const char* who) {
    if (u.size() != tau.size()) throw InvalidInput(std::string(who) + ": u has wrong length");
    for (std::size_t j = 0; j < u.size(); ++j)
        if (u[j] < -tau[j])
            throw InvalidInput(std::string(who) + ": u[" + std::to_string(j) +
                               "] is below the domain bound -tau");
}

} // namespace detail

/// Orthant-wise minimum at fixed u:
///   h_G(u) = min over all 2^n signatures S of ||A S (u + tau) - b||^2.
/// Exhaustive over signatures, so n is capped at 20. Note h_G is not g in
/// general; g is the further minimum of h_G over Q(u).
inline double h_G(const Problem& p, const Vector& u) {
    detail::check_g_domain(u, p.tau, "h_G");
    const std::size_t n = p.n();
    const std::size_t m = p.m();
    if (n > 20)
        throw InvalidInput("h_G: n = " + std::to_string(n) +
                           " exceeds the exhaustive enumeration cap of 20");

    Vector w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = u[j] + p.tau[j];

    double best = 0.0;
    bool first = true;
    Vector resid(m);
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t i = 0; i < m; ++i) resid[i] = -p.b[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double wj = (mask >> j) & 1 ? -w[j] : w[j];
            if (wj == 0.0) continue;
            for (std::size_t i = 0; i < m; ++i) resid[i] += p.a(i, j) * wj;
        }
        const double v = norm_sq(resid);
        if (first || v < best) {
            best = v;
            first = false;
        }
    }
    return best;
}

/// Value function by its symmetric-box characterization:
///   g(u) = min { ||Av - b||^2 : -u - tau <= v <= u + tau },
/// computed with the box solver on the enlarged radii.
inline double g_value(const Problem& p, const Vector& u, const SolverConfig& cfg = {}) {
    detail::check_g_domain(u, p.tau, "g_value");
    Vector radii(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) radii[j] = u[j] + p.tau[j];
    const SolveResult r = solve_box_ls(Problem(p.a, p.b, std::move(radii)), cfg);
    if (!r.converged)
        throw SolverFailure("g_value: box solver did not converge within max_iters");
    return r.objective;
}

/// Diagonal closed form: g(u) = sum_j ||a_j||^2 (min(u_j, c_j) - c_j)^2,
/// i.e. h_G evaluated at the projection (Pu)_j = min(c_j, u_j).
inline double diagonal_g(const DiagonalGeometry& geo, const Vector& u) {
    detail::check_g_domain(u, geo.tau, "diagonal_g");
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double d = std::min(u[j], geo.c[j]) - geo.c[j];
        acc += geo.col_norms_sq[j] * d * d;
    }
    return acc;
}

/// dg/du_j = 2 ||a_j||^2 (u_j - c_j) on [-tau_j, c_j], 0 past c_j.
/// Continuous at u_j = c_j; defined on the interior u_j > -tau_j.
inline Vector diagonal_g_gradient(const DiagonalGeometry& geo, const Vector& u) {
    if (u.size() != geo.tau.size()) throw InvalidInput("diagonal_g_gradient: u has wrong length");
    for (std::size_t j = 0; j < u.size(); ++j)
        if (!(u[j] > -geo.tau[j]))
            throw InvalidInput("diagonal_g_gradient: u[" + std::to_string(j) +
                               "] must be interior (> -tau)");
    Vector grad(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        grad[j] = u[j] <= geo.c[j] ? 2.0 * geo.col_norms_sq[j] * (u[j] - geo.c[j]) : 0.0;
    return grad;
}

/// p* = g(0): the diagonal closed form of the constrained optimum.
inline double p_star_diagonal(const DiagonalGeometry& geo) {
    return diagonal_g(geo, Vector(geo.tau.size(), 0.0));
}

/// Grid description for value-function export: one or two coordinates of
/// u sweep [lo, hi] in steps of `step`; every other coordinate stays 0.
struct GridSpec {
    std::vector<std::size_t> axes;
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

struct GridTable {
    std::vector<std::string> columns; // "u_i", ["u_j",] "g"
    std::vector<Vector> rows;
};

inline GridTable export_g_grid(const Problem& p, const GridSpec& spec,
                               const SolverConfig& cfg = {}) {
    if (spec.axes.empty() || spec.axes.size() > 2)
        throw InvalidInput("export_g_grid: need one or two axes");
    if (spec.axes.size() == 2 && spec.axes[0] == spec.axes[1])
        throw InvalidInput("export_g_grid: axes must be distinct");
    for (std::size_t ax : spec.axes)
        if (ax >= p.n())
            throw InvalidInput("export_g_grid: axis " + std::to_string(ax) + " out of range");
    if (!(spec.step > 0.0)) throw InvalidInput("export_g_grid: step must be > 0");
    if (spec.hi < spec.lo) throw InvalidInput("export_g_grid: empty range");
    for (std::size_t ax : spec.axes)
        if (spec.lo < -p.tau[ax])
            throw InvalidInput("export_g_grid: range leaves the domain of g (lo < -tau)");

    const std::size_t count =
        static_cast<std::size_t>(std::floor((spec.hi - spec.lo) / spec.step + 1e-9)) + 1;

    const bool fast = diagonal_geometry_applicable(p);
    DiagonalGeometry geo;
    if (fast) geo = make_diagonal_geometry(p);

    GridTable table;
    for (std::size_t ax : spec.axes) table.columns.push_back("u_" + std::to_string(ax));
    table.columns.push_back("g");

    Vector u(p.n(), 0.0);
    auto eval = [&](const Vector& point) {
        return fast ? diagonal_g(geo, point) : g_value(p, point, cfg);
    };

    if (spec.axes.size() == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            const double v = spec.lo + static_cast<double>(k) * spec.step;
            u[spec.axes[0]] = v;
            table.rows.push_back({v, eval(u)});
        }
    } else {
        for (std::size_t k0 = 0; k0 < count; ++k0) {
            const double v0 = spec.lo + static_cast<double>(k0) * spec.step;
            u[spec.axes[0]] = v0;
            for (std::size_t k1 = 0; k1 < count; ++k1) {
                const double v1 = spec.lo + static_cast<double>(k1) * spec.step;
                u[spec.axes[1]] = v1;
                table.rows.push_back({v0, v1, eval(u)});
            }
        }
    }
    return table;
}

} // namespace boxlasso
