#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "optexec/scenario.hpp"
#include "optexec/trajectory.hpp"

namespace optexec::testing {

// Reference values computed independently at 30 digits (mpmath) and frozen.
inline constexpr double kCoth1 = 1.31303528549933130;
inline constexpr double kTanh1 = 0.761594155955764888;
inline constexpr double kConstantXHalf = 0.443409441985036954;     // sinh(0.5)/sinh(1)
inline constexpr double kCoshXHalf = 0.351747035907070149;         // sinh(sqrt2/2)/(sinh(sqrt2) cosh(0.5))
inline constexpr double kCoshCost = 1.59189165552048736;           // sqrt2 coth(sqrt2)
inline constexpr double kExpCost = 2.59189165552048736;            // sqrt2 coth(sqrt2) + 1
inline constexpr double kGaussXHalf = 0.433251602013880646;
inline constexpr double kGaussCost = 1.33900332898208692;
inline constexpr double kErmakovUnit = 0.362030830483155233;       // 1/(2 sinh^2 1)

using CF = CoefficientFunction;

inline Scenario constant_scenario(double lambda = 1.0, double x0 = 1.0) {
    return Scenario(0.0, 1.0, x0, lambda, CF::constant(1.0), CF::constant(1.0));
}

inline Scenario cosh_scenario(double a = 1.0, double lambda = 1.0, double x0 = 1.0) {
    return Scenario(0.0, 1.0, x0, lambda, CF::cosh_power(1.0, 1.0, a, 2), CF::cosh_power(1.0, 1.0, a, 1));
}

inline Scenario exp_scenario(double zeta0 = 2.0, double lambda = 1.0, double x0 = 1.0) {
    return Scenario(0.0, 1.0, x0, lambda, CF::exponential(1.0, zeta0), CF::exponential(1.0, 0.5 * zeta0));
}

inline Scenario gaussian_scenario(double x0 = 1.0) {
    return Scenario(0.0, 1.0, x0, 1.0, CF::constant(1.0), CF::quadratic_product(1.0, 1.0, 0.5), Frame::Trader);
}

/// A scenario no closed form covers: smooth, non-monotone coefficients.
inline Scenario tabulated_scenario(double x0 = 2.0, double lambda = 1.5) {
    return Scenario(0.0, 1.0, x0, lambda,
                    CF::tabulated({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, {1.0, 1.15, 1.4, 1.3, 1.1, 1.05}),
                    CF::tabulated({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, {0.8, 0.9, 1.1, 1.2, 1.0, 0.95}));
}

/// A scenario with a smooth but non-family coefficient pair.
inline Scenario mixed_scenario(double x0 = 1.0, double lambda = 2.0) {
    return Scenario(0.0, 1.5, x0, lambda, CF::exponential(1.2, 0.7), CF::cosh_power(0.9, 1.0, 0.8, 1));
}

inline double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline double sup_distance(const Trajectory& a, const Trajectory& b, std::size_t n = 1001) {
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = a.span().uniform_point(i, n);
        out = std::max(out, std::abs(a.value(s) - b.value(s)));
    }
    return out;
}

template <class F>
double sup_distance_fn(const Trajectory& a, F&& f, std::size_t n = 1001) {
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = a.span().uniform_point(i, n);
        out = std::max(out, std::abs(a.value(s) - f(s)));
    }
    return out;
}

}  // namespace optexec::testing
