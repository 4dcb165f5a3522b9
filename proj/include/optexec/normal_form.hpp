#pragma once

#include <functional>
#include <optional>

#include "optexec/model_core.hpp"
#include "optexec/scenario.hpp"
#include "optexec/trajectory.hpp"

namespace optexec {

class Clock;

/// Potential of the normal form u'' = V(s) u obtained with u = x sqrt(eta):
///   V = eta''/(2 eta) + lambda sigma^2/eta - eta'^2/(4 eta^2).
class NormalFormPotential {
public:
    explicit NormalFormPotential(Scenario scenario);

    double eta_curvature(double s) const;  ///< eta''/(2 eta)
    double risk(double s) const;           ///< lambda sigma^2 / eta
    double eta_slope_sq(double s) const;   ///< eta'^2 / (4 eta^2)
    double value(double s) const { return eta_curvature(s) + risk(s) - eta_slope_sq(s); }
    double operator()(double s) const { return value(s); }

    /// The same potential assembled from log-coefficients
    /// eta = eta0 e^{2 zeta1}, sigma = sigma0 e^{zeta2} (reference values at
    /// t0): zeta1'' + zeta1'^2 + (lambda sigma0^2/eta0) e^{2(zeta2 - zeta1)}.
    /// Empty when sigma(t0) or sigma(s) is zero (no logarithm).
    std::optional<double> log_form(double s) const;

    /// Set when eta is tabulated: eta'' is the interpolant's piecewise-linear
    /// second derivative, so V is only first-order accurate between knots.
    bool approximate() const noexcept { return scenario_.eta().derivatives_approximate(); }

    const Scenario& scenario() const noexcept { return scenario_; }

private:
    Scenario scenario_;
    double eta0_;
    double sigma0_;
};

NormalFormPotential potential(const Scenario& scenario);

/// u = x sqrt(eta), u' = x' sqrt(eta) + x eta' / (2 sqrt(eta)).
Trajectory x_to_u(const Trajectory& trajectory, const CoefficientFunction& eta);
/// x = u / sqrt(eta).
Trajectory u_to_x(const Trajectory& u_trajectory, const CoefficientFunction& eta);

enum class CostFrame {
    PhysicalX,  ///< C = -eta x x' at t0; solution is x(s)
    UFrame,     ///< C = -(u u' - u^2 eta'/(2 eta)) at t0; solution is u(s)
    TraderTau,  ///< C = -x x' at tau0; solution is x(tau) under the second-parameter clock
    ClockRate,  ///< C = -(eta / (ds/dtau)) x x' at tau0; solution is x(tau) under any clock
};

/// Boundary-evaluated cost of an on-shell solution. The solution is first
/// checked against its Euler-Lagrange equation (residual sup-norm below
/// 1e-4 max(1, |x0|) on 1001 points) and OffShellError is thrown otherwise.
/// TraderTau and ClockRate require `clock` (TraderTau: a second-parameter
/// clock). The error estimate bounds the dropped bulk term by
/// residual * span * max|x|.
CostReport boundary_cost(const Trajectory& solution, const Scenario& scenario, CostFrame frame,
                         const Clock* clock = nullptr);

}  // namespace optexec
