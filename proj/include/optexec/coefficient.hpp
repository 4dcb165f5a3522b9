#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "optexec/numerics/monotone_cubic.hpp"
#include "optexec/span.hpp"

namespace optexec {

enum class CoefficientFamily { Constant, Exponential, CoshPower, QuadraticProduct, Tabulated };

std::string_view to_string(CoefficientFamily family);

/// c0
struct ConstantParams {
    double c0;
};

/// c0 * exp(rate * s)
struct ExponentialParams {
    double c0;
    double rate;
};

/// c0 * gamma^power * cosh(a s)^power, power in {1, 2}
struct CoshPowerParams {
    double c0;
    double gamma;
    double a;
    int power;
};

/// c0 * (1 + k s^2)^power, power in {1, 1/2}. The square-root form lets a
/// volatility make sigma^2 quadratic in time.
struct QuadraticProductParams {
    double c0;
    double k;
    double power = 1.0;
};

/// Monotone piecewise-cubic interpolant through (knots, values).
struct TabulatedParams {
    std::vector<double> knots;
    std::vector<double> values;
};

/// A time-varying model coefficient (impact eta or volatility sigma) with
/// first and second derivatives. Immutable; cheap to copy.
class CoefficientFunction {
public:
    using Params = std::variant<ConstantParams, ExponentialParams, CoshPowerParams,
                                QuadraticProductParams, TabulatedParams>;

    static CoefficientFunction constant(double c0);
    static CoefficientFunction exponential(double c0, double rate);
    static CoefficientFunction cosh_power(double c0, double gamma, double a, int power);
    static CoefficientFunction quadratic_product(double c0, double k, double power = 1.0);
    /// At least four strictly increasing knots.
    static CoefficientFunction tabulated(std::vector<double> knots, std::vector<double> values);

    CoefficientFamily family() const noexcept;
    const Params& params() const noexcept { return params_; }

    double value(double s) const;
    double derivative(double s) const;
    double second_derivative(double s) const;

    /// True when derivatives come from an interpolant rather than a formula.
    bool derivatives_approximate() const noexcept { return family() == CoefficientFamily::Tabulated; }

    /// Interior points of `span` where the second derivative may jump
    /// (the knots of a Tabulated coefficient); empty for formulas.
    std::vector<double> breakpoints(const Span& span) const;

    /// Throws std::invalid_argument naming `name` and the offending time
    /// unless value > 0 on `span` (>= 0 when `allow_zero`). Parametric
    /// families are checked analytically, Tabulated ones on a 1024-point
    /// grid plus every knot inside the span.
    void require_positive(const Span& span, std::string_view name, bool allow_zero = false) const;

private:
    explicit CoefficientFunction(Params params);

    Params params_;
    std::shared_ptr<const numerics::MonotoneCubic> table_;
};

}  // namespace optexec
