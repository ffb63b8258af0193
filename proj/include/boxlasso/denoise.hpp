#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "boxlasso/errors.hpp"
#include "boxlasso/matrix.hpp"
#include "boxlasso/model.hpp"
#include "boxlasso/rng.hpp"

namespace boxlasso {

struct Signal {
    Vector samples;
    std::string label;

    explicit Signal(Vector samples_, std::string label_ = "")
        : samples(std::move(samples_)), label(std::move(label_)) {
        if (!all_finite(samples)) throw InvalidInput("Signal: samples must be finite");
    }

    std::size_t size() const { return samples.size(); }
};

/// Orthonormal DCT-II matrix: entry (k, j) = s_k cos(pi (2j+1) k / (2n)),
/// s_0 = sqrt(1/n), s_k = sqrt(2/n) otherwise. Rows analyze, columns
/// synthesize: z = D b, b = D^T z.
inline DenseMatrix dct2_matrix(std::size_t n) {
    if (n == 0) throw InvalidInput("dct2_matrix: n must be >= 1");
    const double pi = 3.14159265358979323846;
    DenseMatrix d(n, n);
    const double s0 = std::sqrt(1.0 / static_cast<double>(n));
    const double sk = std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double scale = k == 0 ? s0 : sk;
        for (std::size_t j = 0; j < n; ++j)
            d.at(k, j) = scale * std::cos(pi * (2.0 * static_cast<double>(j) + 1.0) *
                                          static_cast<double>(k) / (2.0 * static_cast<double>(n)));
    }
    return d;
}

/// Real 2n' x 2n' embedding of the unitary DFT on C^{n'}. Complex vectors
/// are interleaved (re, im) pairs; each complex entry F_kj = alpha + i beta
/// becomes the 2x2 block [[alpha, -beta], [beta, alpha]]. Unitarity of the
/// DFT makes the embedding orthogonal, which is what lets the box theory
/// apply to real and imaginary parts separately.
inline DenseMatrix real_embedded_dft_matrix(std::size_t two_n) {
    if (two_n == 0 || two_n % 2 != 0)
        throw InvalidInput("real_embedded_dft_matrix: size must be a positive even number");
    const std::size_t nc = two_n / 2;
    const double pi = 3.14159265358979323846;
    const double scale = 1.0 / std::sqrt(static_cast<double>(nc));
    DenseMatrix d(two_n, two_n);
    for (std::size_t k = 0; k < nc; ++k)
        for (std::size_t j = 0; j < nc; ++j) {
            const double angle = -2.0 * pi * static_cast<double>(k) * static_cast<double>(j) /
                                 static_cast<double>(nc);
            const double alpha = scale * std::cos(angle);
            const double beta = scale * std::sin(angle);
            d.at(2 * k, 2 * j) = alpha;
            d.at(2 * k, 2 * j + 1) = -beta;
            d.at(2 * k + 1, 2 * j) = beta;
            d.at(2 * k + 1, 2 * j + 1) = alpha;
        }
    return d;
}

enum class TransformKind { Identity, DCT2Orthonormal, RealEmbeddedDFT };

inline std::string to_string(TransformKind k) {
    switch (k) {
    case TransformKind::Identity: return "identity";
    case TransformKind::DCT2Orthonormal: return "dct";
    case TransformKind::RealEmbeddedDFT: return "dft";
    }
    return "unknown";
}

/// Orthogonal signal transform: analysis z = D b, synthesis b = D^T z.
/// The synthesis matrix (whose columns are the atoms) is D^T.
class Transform {
public:
    static Transform make(TransformKind kind, std::size_t n) {
        Transform t;
        t.kind_ = kind;
        t.n_ = n;
        switch (kind) {
        case TransformKind::Identity:
            if (n == 0) throw InvalidInput("Transform: size must be >= 1");
            break;
        case TransformKind::DCT2Orthonormal: t.analysis_ = dct2_matrix(n); break;
        case TransformKind::RealEmbeddedDFT: t.analysis_ = real_embedded_dft_matrix(n); break;
        }
        return t;
    }

    TransformKind kind() const { return kind_; }
    std::size_t size() const { return n_; }

    Vector analyze(const Vector& b) const {
        if (b.size() != n_) throw InvalidInput("Transform::analyze: length mismatch");
        return kind_ == TransformKind::Identity ? b : analysis_.mul(b);
    }

    Vector synthesize(const Vector& z) const {
        if (z.size() != n_) throw InvalidInput("Transform::synthesize: length mismatch");
        return kind_ == TransformKind::Identity ? z : analysis_.tmul(z);
    }

    /// Synthesis matrix Phi with Phi^T Phi = I; its j-th column is the
    /// atom whose coefficient the box constraint |z_j| <= tau_j bounds.
    DenseMatrix matrix() const {
        return kind_ == TransformKind::Identity ? DenseMatrix::identity(n_)
                                                : analysis_.transposed();
    }

private:
    TransformKind kind_ = TransformKind::Identity;
    std::size_t n_ = 0;
    DenseMatrix analysis_;
};

/// Multipliers of the identity-design denoising problem in coefficient
/// space: lambda_j = 2 (|z_j| - tau_j)^+.
inline Vector identity_multipliers(const Vector& z, const Vector& tau) {
    if (tau.size() != z.size()) throw InvalidInput("identity_multipliers: dimension mismatch");
    Vector lam(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (!(tau[j] >= 0.0)) throw InvalidInput("identity_multipliers: tau must be >= 0");
        const double over = std::fabs(z[j]) - tau[j];
        lam[j] = over > 0.0 ? 2.0 * over : 0.0;
    }
    return lam;
}

/// Identity-design denoiser: the minimizer of ||x - b||^2 + sum lambda_j |x_j|
/// with lambda_j = 2 (|b_j| - tau_j)^+ is the coordinatewise clamp of b
/// onto [-tau_j, tau_j] (the soft threshold at lambda_j / 2 reproduces it).
inline Signal denoise_identity(const Signal& b, const Vector& tau) {
    if (tau.size() != b.size()) throw InvalidInput("denoise_identity: dimension mismatch");
    for (std::size_t j = 0; j < tau.size(); ++j)
        if (!(tau[j] >= 0.0))
            throw InvalidInput("denoise_identity: tau[" + std::to_string(j) + "] must be >= 0");
    return Signal(clamp_to_box(b.samples, tau), b.label);
}

/// Analysis -> identity denoise in coefficient space -> synthesis. Valid
/// because the transform is orthogonal: the synthesis matrix has diagonal
/// (identity) Gram, so the coefficient problem decouples.
inline Signal denoise_transform(const Signal& b, const Vector& tau, const Transform& t) {
    if (b.size() != t.size()) throw InvalidInput("denoise_transform: signal/transform mismatch");
    if (tau.size() != t.size()) throw InvalidInput("denoise_transform: tau/transform mismatch");
    for (std::size_t j = 0; j < tau.size(); ++j)
        if (!(tau[j] >= 0.0))
            throw InvalidInput("denoise_transform: tau[" + std::to_string(j) + "] must be >= 0");
    const Vector z = t.analyze(b.samples);
    return Signal(t.synthesize(clamp_to_box(z, tau)), b.label);
}

/// Discrete Gaussian smoothing: kernel truncated at +-4 sigma and
/// renormalized to sum 1, reflect padding at the boundaries.
inline Vector gaussian_filter(const Vector& b, double sigma) {
    if (!(sigma > 0.0)) throw InvalidInput("gaussian_filter: sigma must be > 0");
    const std::size_t n = b.size();
    if (n == 0) return {};

    const long radius = std::max(1L, static_cast<long>(std::ceil(4.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double total = 0.0;
    for (long k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * static_cast<double>(k) * static_cast<double>(k) /
                                  (sigma * sigma));
        kernel[static_cast<std::size_t>(k + radius)] = w;
        total += w;
    }
    for (double& w : kernel) w /= total;

    auto reflect = [&](long idx) {
        const long nn = static_cast<long>(n);
        while (idx < 0 || idx >= nn) {
            if (idx < 0) idx = -idx - 1;
            if (idx >= nn) idx = 2 * nn - 1 - idx;
        }
        return static_cast<std::size_t>(idx);
    };

    Vector out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long k = -radius; k <= radius; ++k)
            acc += kernel[static_cast<std::size_t>(k + radius)] *
                   b[reflect(static_cast<long>(i) + k)];
        out[i] = acc;
    }
    return out;
}

/// Voxel-wise box radii from a Gaussian-smoothed version of the noisy
/// signal: tau_j = headroom * |j-th coefficient of the filtered signal|.
inline Vector estimate_tau_gaussian(const Signal& b, double sigma, const Transform& t,
                                    double headroom = 1.0) {
    if (!(sigma > 0.0)) throw InvalidInput("estimate_tau_gaussian: sigma must be > 0");
    if (!(headroom >= 0.0)) throw InvalidInput("estimate_tau_gaussian: headroom must be >= 0");
    if (b.size() != t.size())
        throw InvalidInput("estimate_tau_gaussian: signal/transform mismatch");
    const Vector z = t.analyze(gaussian_filter(b.samples, sigma));
    Vector tau(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) tau[j] = headroom * std::fabs(z[j]);
    return tau;
}

/// b + e with e ~ N(0, noise_sigma^2) from the pinned counter-based
/// generator, so fixtures are bit-reproducible for a given seed.
inline Signal add_gaussian_noise(const Signal& b, double noise_sigma, std::uint64_t seed) {
    if (!(noise_sigma >= 0.0)) throw InvalidInput("add_gaussian_noise: sigma must be >= 0");
    CounterRng rng(seed);
    Vector out = b.samples;
    for (double& v : out) v += noise_sigma * rng.normal();
    return Signal(std::move(out), b.label);
}

} // namespace boxlasso
