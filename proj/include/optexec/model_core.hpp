#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optexec/numerics/quadrature.hpp"
#include "optexec/scenario.hpp"
#include "optexec/trajectory.hpp"

namespace optexec {

/// Value of the execution cost functional for one trajectory.
struct CostReport {
    double total = 0.0;
    /// int eta x'^2; absent when the cost came from a boundary formula.
    std::optional<double> impact_term;
    /// int lambda sigma^2 x^2; absent when the cost came from a boundary formula.
    std::optional<double> risk_term;
    std::string method_tag;
    double abs_error_estimate = 0.0;
};

/// The integrand impact(s) x'^2 + risk(s) x^2 of a quadratic cost
/// functional in some time frame. A Scenario gives impact = eta and
/// risk = lambda sigma^2; a reparametrized scenario gives the effective
/// coefficients in trader time.
struct Lagrangian {
    Span span;
    double x0 = 0.0;
    std::function<double(double)> impact;
    std::function<double(double)> impact_slope;
    std::function<double(double)> risk;
};

Lagrangian lagrangian(const Scenario& scenario);

inline numerics::QuadratureOptions cost_quadrature_options() { return {1e-10, 1e-14, 20}; }

/// Adaptive quadrature of both cost terms. Throws SpanMismatch when the
/// trajectory span differs from the scenario span and QuadratureError
/// (with the best estimate) when refinement is exhausted.
CostReport evaluate_cost(const Lagrangian& lagrangian, const Trajectory& trajectory);
CostReport evaluate_cost(const Scenario& scenario, const Trajectory& trajectory);

struct ResidualReport {
    double sup_norm = 0.0;
    std::vector<std::pair<double, double>> samples;  ///< (s, residual)
};

/// r(s) = impact x'' + impact' x' - risk x on the interior of a uniform
/// grid of `grid_points` (>= 3) points. Trajectories without an analytic
/// second derivative use central differences with the grid step.
ResidualReport el_residual(const Lagrangian& lagrangian, const Trajectory& trajectory,
                           std::size_t grid_points);
ResidualReport el_residual(const Scenario& scenario, const Trajectory& trajectory,
                           std::size_t grid_points);

/// Throws SpanMismatch unless the spans agree to 1e-12 of their length.
void require_same_span(const Span& expected, const Span& actual, const char* what);

}  // namespace optexec
