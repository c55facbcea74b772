#pragma once

#include <stdexcept>
#include <string>

namespace qdecay {

/// Invalid constructor arguments or broken type invariants.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested density cannot be normalized over its support.
class NonNormalizableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The quadrature engine exhausted its evaluation budget before reaching
/// the target tolerance.
class QuadratureNonConvergenceError : public std::runtime_error {
public:
    QuadratureNonConvergenceError(const std::string& what, double t, double achieved, double target)
        : std::runtime_error(what), t(t), achieved_error(achieved), target_tolerance(target) {}
    double t = 0;
    double achieved_error = 0;
    double target_tolerance = 0;
};

/// The spatial window of a grid-based computation does not contain the
/// required probability mass.
class GridTooSmallError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Momentum packet shape without an implemented overlap formula.
class UnsupportedShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qdecay
