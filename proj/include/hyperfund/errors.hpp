#ifndef HYPERFUND_ERRORS_HPP
#define HYPERFUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hyperfund {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the domain of an operation (e.g. hypergeometric z >= 1).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Series or transformation budget exhausted without reaching tolerance.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// Gamma-type function evaluated at a nonpositive-integer pole.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Kernel requested on or outside the light cone boundary.
class ConeBoundary : public Error {
public:
    using Error::Error;
};

/// |phi(t) - phi(t0)| vanished with t > t0: broken family configuration.
class ConeDegenerate : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature could not meet tolerance within its budget.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// A profile with an unbounded singular point was evaluated at that point.
class SingularEvaluation : public Error {
public:
    using Error::Error;
};

/// Spatial dimension not supported by the wave solver.
class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

/// Finite-difference time step violates the CFL stability bound.
class CflViolation : public Error {
public:
    using Error::Error;
};

/// Requested solve window too large for a growing propagation speed.
class WindowTooLarge : public Error {
public:
    using Error::Error;
};

/// Adaptive ODE integration failed (step size underflow).
class IntegrationFailure : public Error {
public:
    using Error::Error;
};

/// Stored grid too coarse for the requested finite-difference stencil.
class InsufficientGrid : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (CLI / config file).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace hyperfund

#endif
