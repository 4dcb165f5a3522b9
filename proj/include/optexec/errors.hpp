#pragma once

#include <stdexcept>
#include <string>

namespace optexec {

/// Base class for every failure raised by the solvers.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A trajectory or Riccati solution was paired with an incompatible span.
class SpanMismatch : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature hit its refinement limit before meeting tolerance.
/// The best available estimate is kept so callers can decide what to do.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

/// A boundary-evaluated cost was requested for a trajectory that does not
/// satisfy its Euler-Lagrange equation.
class OffShellError : public Error {
public:
    OffShellError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Raised when a time-dependent quantity fails at a specific time
/// (non-positive clock rate, Riccati blow-up, Pinney collapse).
class TimedError : public Error {
public:
    TimedError(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class ClockError : public TimedError {
public:
    using TimedError::TimedError;
};

class RiccatiBlowUp : public TimedError {
public:
    using TimedError::TimedError;
};

class PinneyCollapse : public TimedError {
public:
    using TimedError::TimedError;
};

}  // namespace optexec
