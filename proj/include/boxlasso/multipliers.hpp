#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boxlasso/errors.hpp"
#include "boxlasso/geometry.hpp"
#include "boxlasso/matrix.hpp"
#include "boxlasso/model.hpp"

namespace boxlasso {

enum class MultiplierMethod {
    Scalar,
    DiagonalGram,
    GradientSign,
    GradientSignWithSignature,
};

inline std::string to_string(MultiplierMethod m) {
    switch (m) {
    case MultiplierMethod::Scalar: return "scalar";
    case MultiplierMethod::DiagonalGram: return "diagonal_gram";
    case MultiplierMethod::GradientSign: return "gradient_sign";
    case MultiplierMethod::GradientSignWithSignature: return "gradient_sign_with_signature";
    }
    return "unknown";
}

struct MultiplierResult {
    Multipliers lambda;
    MultiplierMethod method;
    std::optional<Signature> signature_used;
    /// Smallest slack in the applicability condition of the method that
    /// produced this result; nonnegative by construction.
    double condition_margin = 0.0;
};

/// Outcome of eliminating the tau_j = 0 coordinates: the reduced problem
/// over J = { j : tau_j != 0 } plus the index map needed to re-embed
/// solutions and multipliers (dropped coordinates get x_j = 0, lambda_j = 0).
struct ZeroTauReduction {
    Problem reduced;
    std::vector<std::size_t> kept; // original index of each reduced coordinate
    std::size_t original_n = 0;

    bool is_identity() const { return kept.size() == original_n; }

    Vector embed(const Vector& reduced_values) const {
        if (reduced_values.size() != kept.size())
            throw InvalidInput("ZeroTauReduction::embed: length mismatch");
        Vector full(original_n, 0.0);
        for (std::size_t k = 0; k < kept.size(); ++k) full[kept[k]] = reduced_values[k];
        return full;
    }
};

inline ZeroTauReduction reduce_zero_tau(const Problem& p) {
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < p.n(); ++j)
        if (p.tau[j] != 0.0) kept.push_back(j);

    const std::size_t m = p.m();
    DenseMatrix reduced_a(m, kept.size());
    Vector reduced_tau(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
        reduced_tau[k] = p.tau[kept[k]];
        for (std::size_t i = 0; i < m; ++i) reduced_a.at(i, k) = p.a(i, kept[k]);
    }
    return ZeroTauReduction{Problem(std::move(reduced_a), p.b, std::move(reduced_tau)), kept,
                            p.n()};
}

/// Scalar case (1x1 design): lambda = 2 a^2 (|b/a| - tau)^+.
inline double scalar_multiplier(double a, double b, double tau) {
    if (a == 0.0) throw InvalidInput("scalar_multiplier: a must be nonzero");
    if (!(tau > 0.0)) throw InvalidInput("scalar_multiplier: tau must be > 0");
    const double overshoot = std::fabs(b / a) - tau;
    return overshoot > 0.0 ? 2.0 * a * a * overshoot : 0.0;
}

/// Diagonal-Gram case. For nonzero columns the multiplier is
///   lambda_j = 2 ||a_j||^2 (|<b,a_j>| / ||a_j||^2 - tau_j)^+,
/// evaluated as -grad g(0) through the value-function geometry so the two
/// code paths share one floating-point expression. Zero columns get
/// lambda_j = 0, and tau_j = 0 coordinates are eliminated first (the
/// diagonality condition only has to hold for the surviving columns).
inline MultiplierResult diagonal_multipliers(const Problem& p, double diag_tol = 1e-10) {
    const ZeroTauReduction red = reduce_zero_tau(p);
    const Problem& q = red.reduced;

    const auto diag = detail::gram_off_diagonal(q.a);
    if (diag.worst_ratio > diag_tol)
        throw Inapplicable("diagonal_multipliers: Gram matrix is not diagonal; worst off-diagonal "
                           "pair (" + std::to_string(red.kept[diag.worst_i]) + "," +
                           std::to_string(red.kept[diag.worst_j]) + ") has relative magnitude " +
                           std::to_string(diag.worst_ratio),
                           diag_tol - diag.worst_ratio);

    std::vector<std::size_t> nonzero; // columns of q with positive norm
    for (std::size_t k = 0; k < q.n(); ++k)
        if (q.a.gram_entry(k, k) != 0.0) nonzero.push_back(k);

    Vector lambda_reduced(q.n(), 0.0);
    if (!nonzero.empty()) {
        DenseMatrix sub(q.m(), nonzero.size());
        Vector sub_tau(nonzero.size());
        for (std::size_t k = 0; k < nonzero.size(); ++k) {
            sub_tau[k] = q.tau[nonzero[k]];
            for (std::size_t i = 0; i < q.m(); ++i) sub.at(i, k) = q.a(i, nonzero[k]);
        }
        const DiagonalGeometry geo = make_diagonal_geometry(Problem(sub, q.b, sub_tau));
        const Vector grad = diagonal_g_gradient(geo, Vector(nonzero.size(), 0.0));
        for (std::size_t k = 0; k < nonzero.size(); ++k)
            lambda_reduced[nonzero[k]] = -grad[k];
    }

    return MultiplierResult{Multipliers(red.embed(lambda_reduced)),
                            MultiplierMethod::DiagonalGram, std::nullopt,
                            diag_tol - diag.worst_ratio};
}

namespace detail {

/// Margins of the gradient-sign condition for signature S:
///   margin_k = s_k <b, a_k> - sum_j tau_j |<a_j, a_k>|.
/// The sum is the exact supremum of the linear form over the box, attained
/// at a signed corner, so margin_k >= 0 for all k certifies
/// S grad f(u) <= 0 on the whole box.
inline Vector signature_margins(const DenseMatrix& gram, const Vector& atb, const Vector& tau,
                                const std::vector<int>& signs) {
    const std::size_t n = tau.size();
    Vector margins(n);
    for (std::size_t k = 0; k < n; ++k) {
        double corner_sup = 0.0;
        for (std::size_t j = 0; j < n; ++j) corner_sup += tau[j] * std::fabs(gram(j, k));
        margins[k] = (signs[k] > 0 ? atb[k] : -atb[k]) - corner_sup;
    }
    return margins;
}

inline DenseMatrix gram_matrix(const DenseMatrix& a) {
    const std::size_t n = a.cols();
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = a.gram_entry(i, j);
            g.at(i, j) = v;
            g.at(j, i) = v;
        }
    return g;
}

/// lambda = -S grad f(S tau) = 2 S A^T (b - A S tau).
inline Vector signed_gradient_multipliers(const Problem& p, const std::vector<int>& signs) {
    Vector stau(p.n());
    for (std::size_t j = 0; j < p.n(); ++j) stau[j] = signs[j] > 0 ? p.tau[j] : -p.tau[j];
    Vector r = p.a.mul(stau);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.b[i] - r[i];
    Vector lambda = p.a.tmul(r);
    for (std::size_t j = 0; j < p.n(); ++j) {
        lambda[j] *= 2.0;
        if (signs[j] < 0) lambda[j] = -lambda[j];
        if (lambda[j] < 0.0) lambda[j] = 0.0; // roundoff guard; margins certify >= 0
    }
    return lambda;
}

} // namespace detail

/// Gradient-sign case: requires grad f <= 0 on the whole box, i.e.
///   sum_j tau_j |<a_j, a_k>|  <=  <b, a_k>   for every k,
/// and then lambda = 2 A^T (b - A tau). Note the factor 2: lambda is
/// -grad f(tau) for f(x) = ||Ax - b||^2, consistent with the scalar and
/// diagonal formulas (see README, "factor of two").
inline MultiplierResult gradient_sign_multipliers(const Problem& p) {
    const ZeroTauReduction red = reduce_zero_tau(p);
    const Problem& q = red.reduced;

    const DenseMatrix gram = detail::gram_matrix(q.a);
    const Vector atb = q.a.tmul(q.b);
    const std::vector<int> identity(q.n(), 1);
    const Vector margins = detail::signature_margins(gram, atb, q.tau, identity);

    double worst = 0.0;
    std::size_t worst_k = 0;
    bool first = true;
    for (std::size_t k = 0; k < margins.size(); ++k)
        if (first || margins[k] < worst) {
            worst = margins[k];
            worst_k = k;
            first = false;
        }
    if (!first && worst < 0.0)
        throw Inapplicable("gradient_sign_multipliers: condition fails at coordinate " +
                           std::to_string(red.kept[worst_k]) + " with margin " +
                           std::to_string(worst),
                           worst);

    const Vector lambda = detail::signed_gradient_multipliers(q, identity);
    return MultiplierResult{Multipliers(red.embed(lambda)), MultiplierMethod::GradientSign,
                            std::nullopt, first ? 0.0 : worst};
}

/// Signature generalization: find S with S grad f <= 0 on the box; then
/// lambda = -S grad f(S tau) = 2 S A^T (b - A S tau). Signatures are
/// scanned in lexicographic order (bit j set <=> s_j = -1) starting from
/// sign(A^T b) and wrapping around, which tests the heuristically most
/// likely signature first. Exhaustive, so n is capped at 20.
inline MultiplierResult gradient_sign_with_signature(const Problem& p) {
    const ZeroTauReduction red = reduce_zero_tau(p);
    const Problem& q = red.reduced;
    const std::size_t n = q.n();
    if (n > 20)
        throw InvalidInput("gradient_sign_with_signature: n = " + std::to_string(n) +
                           " exceeds the exhaustive-search cap of 20");

    const DenseMatrix gram = detail::gram_matrix(q.a);
    const Vector atb = q.a.tmul(q.b);

    std::uint64_t start_mask = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (atb[j] < 0.0) start_mask |= (1ULL << j);

    const std::uint64_t total = 1ULL << n;
    double best_margin = 0.0;
    bool have_margin = false;
    for (std::uint64_t offset = 0; offset < total; ++offset) {
        const std::uint64_t mask = (start_mask + offset) & (total - 1);
        std::vector<int> signs(n);
        for (std::size_t j = 0; j < n; ++j) signs[j] = (mask >> j) & 1 ? -1 : 1;

        const Vector margins = detail::signature_margins(gram, atb, q.tau, signs);
        double worst = 0.0;
        bool first = true;
        for (double mg : margins)
            if (first || mg < worst) {
                worst = mg;
                first = false;
            }
        if (!have_margin || worst > best_margin) {
            best_margin = worst;
            have_margin = true;
        }
        if (first || worst >= 0.0) {
            const Vector lambda = detail::signed_gradient_multipliers(q, signs);
            std::vector<int> full_signs(red.original_n, 1);
            for (std::size_t k = 0; k < red.kept.size(); ++k) full_signs[red.kept[k]] = signs[k];
            return MultiplierResult{Multipliers(red.embed(lambda)),
                                    MultiplierMethod::GradientSignWithSignature,
                                    Signature(std::move(full_signs)), first ? 0.0 : worst};
        }
    }
    throw Inapplicable("gradient_sign_with_signature: no admissible signature; best margin " +
                       std::to_string(best_margin),
                       best_margin);
}

/// Dispatch: tau = 0 reduction happens inside each method; then
/// 1x1 scalar, diagonal Gram, gradient sign, gradient sign with signature,
/// in that order. Throws Inapplicable when nothing applies.
inline MultiplierResult auto_multipliers(const Problem& p, double diag_tol = 1e-10) {
    {
        const ZeroTauReduction red = reduce_zero_tau(p);
        if (red.reduced.n() == 1 && red.reduced.m() == 1 && red.reduced.a(0, 0) != 0.0) {
            const double lam =
                scalar_multiplier(red.reduced.a(0, 0), red.reduced.b[0], red.reduced.tau[0]);
            return MultiplierResult{Multipliers(red.embed({lam})), MultiplierMethod::Scalar,
                                    std::nullopt, red.reduced.tau[0]};
        }
    }
    try {
        return diagonal_multipliers(p, diag_tol);
    } catch (const Inapplicable&) {
    }
    try {
        return gradient_sign_multipliers(p);
    } catch (const Inapplicable&) {
    }
    try {
        return gradient_sign_with_signature(p);
    } catch (const Inapplicable&) {
    } catch (const InvalidInput&) {
        // n over the signature-search cap: fall through to the terminal error.
    }
    throw Inapplicable("auto_multipliers: no closed form available for this problem; "
                       "use the solvers directly (solve --formulation box)",
                       -1.0);
}

} // namespace boxlasso
