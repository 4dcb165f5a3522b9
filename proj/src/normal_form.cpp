#include "optexec/normal_form.hpp"

#include <cmath>
#include <stdexcept>

#include "optexec/errors.hpp"
#include "optexec/kernels.hpp"
#include "optexec/reparam.hpp"

namespace optexec {

NormalFormPotential::NormalFormPotential(Scenario scenario)
    : scenario_(std::move(scenario)),
      eta0_(scenario_.eta().value(scenario_.t0())),
      sigma0_(scenario_.sigma().value(scenario_.t0())) {}

double NormalFormPotential::eta_curvature(double s) const {
    return scenario_.eta().second_derivative(s) / (2.0 * scenario_.eta().value(s));
}

double NormalFormPotential::risk(double s) const {
    return scenario_.risk_weight(s) / scenario_.eta().value(s);
}

double NormalFormPotential::eta_slope_sq(double s) const {
    const double ratio = scenario_.eta().derivative(s) / scenario_.eta().value(s);
    return ratio * ratio / 4.0;
}

std::optional<double> NormalFormPotential::log_form(double s) const {
    const double sigma = scenario_.sigma().value(s);
    if (!(sigma0_ > 0.0) || !(sigma > 0.0)) return std::nullopt;
    const auto& eta = scenario_.eta();
    const double e = eta.value(s);
    const double de = eta.derivative(s);
    const double zeta1 = 0.5 * std::log(e / eta0_);
    const double zeta2 = std::log(sigma / sigma0_);
    const double dzeta1 = de / (2.0 * e);
    const double ddzeta1 = eta.second_derivative(s) / (2.0 * e) - de * de / (2.0 * e * e);
    return ddzeta1 + dzeta1 * dzeta1 +
           scenario_.lambda() * sigma0_ * sigma0_ / eta0_ * std::exp(2.0 * (zeta2 - zeta1));
}

NormalFormPotential potential(const Scenario& scenario) { return NormalFormPotential(scenario); }

Trajectory x_to_u(const Trajectory& x, const CoefficientFunction& eta) {
    auto value = [x, eta](double s) { return x.value(s) * std::sqrt(eta.value(s)); };
    auto derivative = [x, eta](double s) {
        const double e = eta.value(s);
        const double root = std::sqrt(e);
        return x.derivative(s) * root + x.value(s) * eta.derivative(s) / (2.0 * root);
    };
    Trajectory::Fn second;
    if (x.has_second_derivative()) {
        second = [x, eta](double s) {
            const double e = eta.value(s), de = eta.derivative(s), dde = eta.second_derivative(s);
            const double root = std::sqrt(e);
            return *x.second_derivative(s) * root + x.derivative(s) * de / root +
                   x.value(s) * (dde / (2.0 * root) - de * de / (4.0 * e * root));
        };
    }
    const auto breaks = x.breakpoints();
    return Trajectory::closed_form(x.span(), value, derivative, second, x.family(),
                                   x.method_tag() + "|u", {breaks.begin() + 1, breaks.end() - 1});
}

Trajectory u_to_x(const Trajectory& u, const CoefficientFunction& eta) {
    auto value = [u, eta](double s) { return u.value(s) / std::sqrt(eta.value(s)); };
    auto derivative = [u, eta](double s) {
        const double e = eta.value(s);
        const double root = std::sqrt(e);
        return u.derivative(s) / root - u.value(s) * eta.derivative(s) / (2.0 * e * root);
    };
    Trajectory::Fn second;
    if (u.has_second_derivative()) {
        second = [u, eta](double s) {
            const double e = eta.value(s), de = eta.derivative(s), dde = eta.second_derivative(s);
            const double root = std::sqrt(e);
            const double e32 = e * root;
            return *u.second_derivative(s) / root - u.derivative(s) * de / e32 +
                   u.value(s) * (-dde / (2.0 * e32) + 3.0 * de * de / (4.0 * e * e32));
        };
    }
    const auto breaks = u.breakpoints();
    return Trajectory::closed_form(u.span(), value, derivative, second, u.family(),
                                   u.method_tag() + "|x", {breaks.begin() + 1, breaks.end() - 1});
}

namespace {

constexpr std::size_t kShellGrid = 1001;
constexpr double kShellTolerance = 1e-4;

double max_abs_value(const Trajectory& t) {
    const auto grid = kernels::uniform_grid(t.span().start, t.span().end, kShellGrid);
    std::vector<double> values(grid.size());
    kernels::sample([&t](double s) { return t.value(s); }, grid, values);
    return kernels::max_abs(values);
}

/// Returns the dropped-bulk-term error bound; throws when off shell.
double require_on_shell(const Lagrangian& l, const Trajectory& solution, double x0) {
    const auto residual = el_residual(l, solution, kShellGrid);
    const double scale = std::max(1.0, std::abs(x0));
    if (!(residual.sup_norm < kShellTolerance * scale)) {
        throw OffShellError("boundary_cost: trajectory does not satisfy its Euler-Lagrange equation",
                            residual.sup_norm);
    }
    return residual.sup_norm * l.span.length() * max_abs_value(solution);
}

}  // namespace

CostReport boundary_cost(const Trajectory& solution, const Scenario& scenario, CostFrame frame,
                         const Clock* clock) {
    CostReport report;
    switch (frame) {
        case CostFrame::PhysicalX: {
            report.abs_error_estimate = require_on_shell(lagrangian(scenario), solution, scenario.x0());
            const double t = scenario.t0();
            report.total = -scenario.eta().value(t) * solution.value(t) * solution.derivative(t);
            report.method_tag = "boundary:physical_x";
            break;
        }
        case CostFrame::UFrame: {
            auto v = std::make_shared<NormalFormPotential>(scenario);
            Lagrangian l{scenario.span(), scenario.x0(), [](double) { return 1.0; },
                         [](double) { return 0.0; }, [v](double s) { return v->value(s); }};
            const double x0_u = scenario.x0() * std::sqrt(scenario.eta().value(scenario.t0()));
            report.abs_error_estimate = require_on_shell(l, solution, x0_u);
            const double t = scenario.t0();
            const double u = solution.value(t);
            const double du = solution.derivative(t);
            const double log_slope = scenario.eta().derivative(t) / scenario.eta().value(t);
            report.total = -(u * du - 0.5 * u * u * log_slope);
            report.method_tag = "boundary:u_frame";
            break;
        }
        case CostFrame::TraderTau:
        case CostFrame::ClockRate: {
            if (clock == nullptr) throw std::invalid_argument("boundary_cost: trader frames need a clock");
            if (frame == CostFrame::TraderTau && clock->kind() != ClockKind::SecondParameter) {
                throw std::invalid_argument("boundary_cost: trader_tau frame needs the second-parameter clock");
            }
            const auto effective = transform_scenario(*clock, scenario);
            report.abs_error_estimate = require_on_shell(effective.lagrangian(), solution, scenario.x0());
            const double tau0 = effective.tau_span().start;
            const double weight = frame == CostFrame::TraderTau ? 1.0 : effective.impact(tau0);
            report.total = -weight * solution.value(tau0) * solution.derivative(tau0);
            report.method_tag = frame == CostFrame::TraderTau ? "boundary:trader_tau" : "boundary:clock_rate";
            break;
        }
    }
    return report;
}

}  // namespace optexec
