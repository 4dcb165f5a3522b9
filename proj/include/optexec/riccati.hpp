#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "optexec/closed_form.hpp"
#include "optexec/numerics/ode.hpp"
#include "optexec/reparam.hpp"
#include "optexec/scenario.hpp"
#include "optexec/span.hpp"

namespace optexec {

/// F(end) = value (integrated backward) or F(start) = value (forward).
struct RiccatiCondition {
    enum class Kind { Terminal, Initial };
    Kind kind = Kind::Terminal;
    double value = 0.0;

    static RiccatiCondition terminal(double v = 0.0) { return {Kind::Terminal, v}; }
    static RiccatiCondition initial(double v) { return {Kind::Initial, v}; }
};

/// Solution of F' + F^2 = W with cubic Hermite dense output for F and its
/// exact antiderivative f (f(span.start) = 0), so f' = F holds identically.
class RiccatiSolution {
public:
    const Span& span() const noexcept;
    const RiccatiCondition& condition() const noexcept;
    /// Time at which |F| passed 1e8 (refined to the pole), if it did.
    std::optional<double> blow_up() const noexcept;
    /// Part of the span the dense output covers (all of it without blow-up).
    Span covered() const noexcept;

    double F(double tau) const;
    /// Derivative of the dense output (not W - F^2).
    double F_derivative(double tau) const;
    double f(double tau) const;
    double W(double tau) const;
    /// int_tau^{span.end} e^{-2 f(z)} dz; zero at span.end exactly.
    double J(double tau) const;
    /// max |W| over the nodes and a 1025-point presample.
    double max_abs_W() const noexcept;
    /// Summed quadrature error of the J segments.
    double J_error_estimate() const noexcept;

    std::span<const double> nodes() const noexcept;

private:
    friend RiccatiSolution solve_riccati(std::function<double(double)> W, Span span,
                                         RiccatiCondition condition, const numerics::OdeOptions& options,
                                         std::span<const double> breakpoints);
    struct Impl;
    explicit RiccatiSolution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Default ODE settings: rel 1e-10, abs 1e-12, max step span/256 (tightened
/// for large |W|).
numerics::OdeOptions riccati_ode_options();

/// Throws Error on a non-finite W sample and when the integrator fails for
/// reasons other than blow-up. Blow-up is recorded, not thrown. Steps are
/// restarted at `breakpoints`, interior points where W is not smooth.
RiccatiSolution solve_riccati(std::function<double(double)> W, Span span,
                              RiccatiCondition condition = RiccatiCondition::terminal(),
                              const numerics::OdeOptions& options = riccati_ode_options(),
                              std::span<const double> breakpoints = {});

/// x(tau) = x0 e^{f(tau)} J_F(tau) / (e^{f(tau0)} J_F(tau0)), J_F(tau) = int_tau^{tauF} e^{-2f},
/// with cost x0^2 (e^{-2 f(tau0)} / J_F(tau0) - F(tau0)). The trajectory
/// satisfies x'' = W x and carries x(tau0) = x0, x(tauF) = 0 exactly.
/// Throws RiccatiBlowUp when the solution diverged and SpanMismatch when
/// [tau0, tauF] is not covered.
ClosedFormSolution reconstruct(const RiccatiSolution& riccati, double x0, double tau0, double tauF);

enum class RiccatiFrame {
    UFrameS,   ///< W = normal-form potential V(s), unknown u = x sqrt(eta)
    TauFrame,  ///< W = lambda sigma^2 eta at s(tau), second-parameter clock
};

struct RiccatiCoefficient {
    std::function<double(double)> W;
    Span span;
    std::optional<Clock> clock;  ///< set for TauFrame
    std::vector<double> breakpoints;  ///< interior points where W is not smooth
};

RiccatiCoefficient coefficient_W(const Scenario& scenario, RiccatiFrame frame);

/// Full Riccati path back to a physical-time trajectory and its cost.
/// TauFrame: solve on [0, tauF], reconstruct, pull back through the clock.
/// UFrameS: solve on [t0, T] for u, map back with u = x sqrt(eta).
ClosedFormSolution solve_scenario_riccati(const Scenario& scenario,
                                          RiccatiFrame frame = RiccatiFrame::TauFrame);

}  // namespace optexec
