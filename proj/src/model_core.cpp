#include "optexec/model_core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "optexec/errors.hpp"
#include "optexec/kernels.hpp"

namespace optexec {

Lagrangian lagrangian(const Scenario& scenario) {
    Lagrangian l;
    l.span = scenario.span();
    l.x0 = scenario.x0();
    l.impact = [eta = scenario.eta()](double s) { return eta.value(s); };
    l.impact_slope = [eta = scenario.eta()](double s) { return eta.derivative(s); };
    l.risk = [scenario](double s) { return scenario.risk_weight(s); };
    return l;
}

void require_same_span(const Span& expected, const Span& actual, const char* what) {
    const double slack = 1e-12 * expected.length();
    if (std::abs(expected.start - actual.start) > slack || std::abs(expected.end - actual.end) > slack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << ": span [" << actual.start << ", " << actual.end << "] does not match ["
            << expected.start << ", " << expected.end << "]";
        throw SpanMismatch(msg.str());
    }
}

CostReport evaluate_cost(const Lagrangian& l, const Trajectory& trajectory) {
    require_same_span(l.span, trajectory.span(), "evaluate_cost");
    const auto breaks = trajectory.breakpoints();
    const auto options = cost_quadrature_options();
    auto impact = numerics::integrate(
        [&](double s) {
            const double v = trajectory.derivative(s);
            return l.impact(s) * v * v;
        },
        breaks, options);
    auto risk = numerics::integrate(
        [&](double s) {
            const double x = trajectory.value(s);
            return l.risk(s) * x * x;
        },
        breaks, options);
    CostReport report;
    report.impact_term = impact.value;
    report.risk_term = risk.value;
    report.total = impact.value + risk.value;
    report.abs_error_estimate = impact.abs_error + risk.abs_error;
    report.method_tag = "quadrature";
    return report;
}

CostReport evaluate_cost(const Scenario& scenario, const Trajectory& trajectory) {
    return evaluate_cost(lagrangian(scenario), trajectory);
}

ResidualReport el_residual(const Lagrangian& l, const Trajectory& trajectory, std::size_t grid_points) {
    if (grid_points < 3) throw std::invalid_argument("el_residual: grid_points must be >= 3");
    require_same_span(l.span, trajectory.span(), "el_residual");
    const double h = l.span.length() / static_cast<double>(grid_points - 1);
    const auto grid = kernels::uniform_grid(l.span.start, l.span.end, grid_points);
    const std::span<const double> interior(grid.data() + 1, grid_points - 2);
    const bool analytic = trajectory.has_second_derivative();
    auto residual = [&](double s) {
        const double x = trajectory.value(s);
        const double dx = trajectory.derivative(s);
        const double ddx = analytic
                               ? *trajectory.second_derivative(s)
                               : (trajectory.value(s + h) - 2.0 * x + trajectory.value(s - h)) / (h * h);
        return l.impact(s) * ddx + l.impact_slope(s) * dx - l.risk(s) * x;
    };
    std::vector<double> values(interior.size());
    kernels::sample(residual, interior, values);
    ResidualReport report;
    report.sup_norm = kernels::max_abs(values);
    report.samples.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) report.samples.emplace_back(interior[i], values[i]);
    return report;
}

ResidualReport el_residual(const Scenario& scenario, const Trajectory& trajectory, std::size_t grid_points) {
    return el_residual(lagrangian(scenario), trajectory, grid_points);
}

}  // namespace optexec
