#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "boxlasso/errors.hpp"

namespace boxlasso {

using Vector = std::vector<double>;

inline double dot(const Vector& x, const Vector& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

inline double norm_sq(const Vector& x) { return dot(x, x); }

inline double inf_norm(const Vector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

inline bool all_finite(const Vector& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Dense row-major matrix. Everything in this library is desk-scale
/// (n of the order of tens), so there is no sparse or blocked storage.
/// Zero-sized matrices are allowed: they represent problems whose
/// coordinates were all eliminated by the tau = 0 reduction.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_)
            throw InvalidInput("DenseMatrix: entries length " + std::to_string(entries_.size()) +
                               " does not equal rows*cols = " + std::to_string(rows_ * cols_));
        if (!all_finite(entries_))
            throw InvalidInput("DenseMatrix: entries must be finite (no NaN/Inf)");
    }

    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Vector& entries() const { return entries_; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    double& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    /// j-th column a_{*,j}.
    Vector column(std::size_t j) const {
        if (j >= cols_) throw InvalidInput("column: index " + std::to_string(j) + " out of range");
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    /// <a_{*,i}, a_{*,j}>. Summation runs over the row index ascending for
    /// every (i, j), so gram_entry(i, j) == gram_entry(j, i) bit-exactly.
    double gram_entry(std::size_t i, std::size_t j) const {
        if (i >= cols_ || j >= cols_)
            throw InvalidInput("gram_entry: index out of range");
        double acc = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) acc += (*this)(r, i) * (*this)(r, j);
        return acc;
    }

    /// A * x
    Vector mul(const Vector& x) const {
        if (x.size() != cols_) throw InvalidInput("mul: vector length does not match cols");
        Vector y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double acc = 0.0;
            const double* row = entries_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    /// A^T * y
    Vector tmul(const Vector& y) const {
        if (y.size() != rows_) throw InvalidInput("tmul: vector length does not match rows");
        Vector x(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* row = entries_.data() + i * cols_;
            const double yi = y[i];
            for (std::size_t j = 0; j < cols_; ++j) x[j] += row[j] * yi;
        }
        return x;
    }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = (*this)(i, j);
        return t;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector entries_;
};

} // namespace boxlasso
