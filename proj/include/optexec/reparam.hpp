#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "optexec/model_core.hpp"
#include "optexec/scenario.hpp"
#include "optexec/trajectory.hpp"

namespace optexec {

enum class ClockKind {
    Identity,         ///< tau = s - t0
    AlmgrenChriss,    ///< dtau/ds = sigma^2
    FirstParameter,   ///< dtau/ds = sigma sqrt(eta0) / (sigma0 sqrt(eta))
    SecondParameter,  ///< dtau/ds = 1 / eta  (unit effective impact)
};

std::string_view to_string(ClockKind kind);

/// Strictly increasing map tau(s) between physical time and a trader
/// clock, with tau(t0) = 0. The forward map is tabulated at kTableSize
/// points by quadrature of the rate and refined inside a cell on demand;
/// the inverse uses a monotone cubic through the table plus one Newton
/// step.
class Clock {
public:
    static constexpr std::size_t kTableSize = 4097;

    ClockKind kind() const noexcept;
    /// dtau/ds
    double rate(double s) const;
    /// d/ds (dtau/ds)
    double rate_derivative(double s) const;
    double tau(double s) const;
    double s_of_tau(double tau) const;

    Span physical_span() const noexcept;
    /// [0, tau(T)]
    Span tau_span() const noexcept;

    std::span<const double> table_s() const noexcept;
    std::span<const double> table_tau() const noexcept;

private:
    friend Clock build_clock(ClockKind kind, const Scenario& scenario);
    struct Impl;
    explicit Clock(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Throws ClockError naming the first time on a 1024-point grid where the
/// rate is not a positive finite number (e.g. sigma = 0 for the
/// Almgren-Chriss or first-parameter clock).
Clock build_clock(ClockKind kind, const Scenario& scenario);

/// A scenario seen in trader time: the cost functional becomes
///   int impact(tau) x'(tau)^2 + risk(tau) x(tau)^2 dtau
/// with impact = eta * dtau/ds and risk = lambda sigma^2 / (dtau/ds),
/// both evaluated at s(tau).
class EffectiveScenario {
public:
    EffectiveScenario(Clock clock, Scenario base);

    const Clock& clock() const noexcept { return clock_; }
    const Scenario& base() const noexcept { return base_; }
    Span tau_span() const noexcept { return clock_.tau_span(); }

    double impact(double tau) const;
    double impact_slope(double tau) const;
    /// Effective sigma^2 (without lambda).
    double sigma_squared(double tau) const;
    /// lambda * effective sigma^2
    double risk(double tau) const;

    Lagrangian lagrangian() const;

private:
    Clock clock_;
    Scenario base_;
};

/// Precondition: the clock was built from `scenario` (spans must agree).
EffectiveScenario transform_scenario(const Clock& clock, const Scenario& scenario);

/// x(s) = x_tau(tau(s)) with chain-ruled derivatives. Boundary values are
/// carried over exactly. Throws SpanMismatch unless the trajectory spans
/// the clock's tau span.
Trajectory pull_back_trajectory(const Clock& clock, const Trajectory& tau_trajectory);

}  // namespace optexec
