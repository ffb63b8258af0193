#pragma once

#include <stdexcept>
#include <string>

namespace boxlasso {

/// Malformed input: bad dimensions, non-finite entries, negative radii,
/// unparseable files. The message names the offending field.
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed-form multiplier method was asked for on a problem that does
/// not satisfy its applicability condition. `margin()` is the (negative)
/// slack of the violated condition.
class Inapplicable : public std::runtime_error {
public:
    Inapplicable(const std::string& what, double margin)
        : std::runtime_error(what), margin_(margin) {}

    double margin() const { return margin_; }

private:
    double margin_ = 0.0;
};

/// A linear system had no usable Cholesky factorization.
class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver ran out of iterations where a value (not a
/// SolveResult) was required.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace boxlasso
