#include "optexec/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "optexec/errors.hpp"
#include "optexec/kernels.hpp"
#include "optexec/numerics/monotone_cubic.hpp"
#include "optexec/numerics/quadrature.hpp"

namespace optexec {

std::string_view to_string(ClockKind kind) {
    switch (kind) {
        case ClockKind::Identity: return "identity";
        case ClockKind::AlmgrenChriss: return "almgren-chriss";
        case ClockKind::FirstParameter: return "first-parameter";
        case ClockKind::SecondParameter: return "second-parameter";
    }
    return "unknown";
}

struct Clock::Impl {
    ClockKind kind;
    Span span;
    CoefficientFunction eta;
    CoefficientFunction sigma;
    double eta0;
    double sigma0;
    std::vector<double> s_table;
    std::vector<double> tau_table;
    numerics::MonotoneCubic inverse;

    double rate(double s) const {
        switch (kind) {
            case ClockKind::Identity: return 1.0;
            case ClockKind::AlmgrenChriss: {
                const double v = sigma.value(s);
                return v * v;
            }
            case ClockKind::FirstParameter:
                return sigma.value(s) * std::sqrt(eta0) / (sigma0 * std::sqrt(eta.value(s)));
            case ClockKind::SecondParameter: return 1.0 / eta.value(s);
        }
        return 1.0;
    }

    double rate_derivative(double s) const {
        switch (kind) {
            case ClockKind::Identity: return 0.0;
            case ClockKind::AlmgrenChriss: return 2.0 * sigma.value(s) * sigma.derivative(s);
            case ClockKind::FirstParameter: {
                const double e = eta.value(s);
                const double v = sigma.value(s);
                return rate(s) * (sigma.derivative(s) / v - eta.derivative(s) / (2.0 * e));
            }
            case ClockKind::SecondParameter: {
                const double e = eta.value(s);
                return -eta.derivative(s) / (e * e);
            }
        }
        return 0.0;
    }

    double integrate_rate(double a, double b) const {
        if (a == b) return 0.0;
        numerics::QuadratureOptions options{1e-14, 1e-300, 20};
        return numerics::integrate_adaptive([this](double s) { return rate(s); }, a, b, options).value;
    }

    std::size_t cell(double s) const {
        const double h = span.length() / static_cast<double>(s_table.size() - 1);
        auto i = static_cast<std::size_t>((s - span.start) / h);
        i = std::min(i, s_table.size() - 2);
        if (s < s_table[i] && i > 0) --i;
        else if (s > s_table[i + 1] && i + 2 < s_table.size()) ++i;
        return i;
    }

    double tau(double s) const {
        if (s <= span.start) return 0.0;
        if (s >= span.end) return tau_table.back();
        const std::size_t i = cell(s);
        return tau_table[i] + integrate_rate(s_table[i], s);
    }
};

ClockKind Clock::kind() const noexcept { return impl_->kind; }
double Clock::rate(double s) const { return impl_->rate(s); }
double Clock::rate_derivative(double s) const { return impl_->rate_derivative(s); }
double Clock::tau(double s) const { return impl_->tau(s); }
Span Clock::physical_span() const noexcept { return impl_->span; }
Span Clock::tau_span() const noexcept { return Span{0.0, impl_->tau_table.back()}; }
std::span<const double> Clock::table_s() const noexcept { return impl_->s_table; }
std::span<const double> Clock::table_tau() const noexcept { return impl_->tau_table; }

double Clock::s_of_tau(double tau) const {
    const auto& d = *impl_;
    if (tau <= 0.0) return d.span.start;
    if (tau >= d.tau_table.back()) return d.span.end;
    double s = d.inverse.value(tau);
    s = std::clamp(s, d.span.start, d.span.end);
    s -= (d.tau(s) - tau) / d.rate(s);
    return std::clamp(s, d.span.start, d.span.end);
}

Clock build_clock(ClockKind kind, const Scenario& scenario) {
    auto impl = std::make_shared<Clock::Impl>(Clock::Impl{
        kind, scenario.span(), scenario.eta(), scenario.sigma(), scenario.eta().value(scenario.t0()),
        scenario.sigma().value(scenario.t0()), {}, {}, {}});

    auto reject = [kind](double s) {
        std::ostringstream msg;
        msg.precision(17);
        msg << to_string(kind) << " clock rate is not positive at s = " << s;
        throw ClockError(msg.str(), s);
    };
    constexpr std::size_t check_points = 1024;
    std::vector<double> probes(check_points);
    for (std::size_t i = 0; i < check_points; ++i) probes[i] = scenario.span().uniform_point(i, check_points);
    for (double b : scenario.eta().breakpoints(scenario.span())) probes.push_back(b);
    for (double b : scenario.sigma().breakpoints(scenario.span())) probes.push_back(b);
    std::sort(probes.begin(), probes.end());
    for (double s : probes) {
        const double r = impl->rate(s);
        if (!(std::isfinite(r) && r > 0.0)) reject(s);
    }

    impl->s_table = kernels::uniform_grid(scenario.t0(), scenario.T(), Clock::kTableSize);
    std::vector<double> increments(Clock::kTableSize - 1);
    std::vector<double> cells(Clock::kTableSize - 1);
    for (std::size_t i = 0; i + 1 < Clock::kTableSize; ++i) cells[i] = static_cast<double>(i);
    const auto& s_table = impl->s_table;
    const Clock::Impl& ref = *impl;
    kernels::sample(
        [&](double i) {
            const auto k = static_cast<std::size_t>(i);
            return ref.integrate_rate(s_table[k], s_table[k + 1]);
        },
        cells, increments);
    impl->tau_table.resize(Clock::kTableSize);
    impl->tau_table[0] = 0.0;
    for (std::size_t i = 0; i + 1 < Clock::kTableSize; ++i) {
        impl->tau_table[i + 1] = impl->tau_table[i] + increments[i];
        if (!(impl->tau_table[i + 1] > impl->tau_table[i])) reject(s_table[i]);
    }
    std::vector<double> slopes(Clock::kTableSize);
    for (std::size_t i = 0; i < Clock::kTableSize; ++i) {
        const double r = impl->rate(s_table[i]);
        if (!(r > 0.0)) reject(s_table[i]);
        slopes[i] = 1.0 / r;
    }
    impl->inverse = numerics::MonotoneCubic(impl->tau_table, impl->s_table, std::move(slopes));
    return Clock(std::move(impl));
}

EffectiveScenario::EffectiveScenario(Clock clock, Scenario base)
    : clock_(std::move(clock)), base_(std::move(base)) {
    require_same_span(base_.span(), clock_.physical_span(), "transform_scenario");
}

double EffectiveScenario::impact(double tau) const {
    const double s = clock_.s_of_tau(tau);
    return base_.eta().value(s) * clock_.rate(s);
}

double EffectiveScenario::impact_slope(double tau) const {
    const double s = clock_.s_of_tau(tau);
    const double r = clock_.rate(s);
    return (base_.eta().derivative(s) * r + base_.eta().value(s) * clock_.rate_derivative(s)) / r;
}

double EffectiveScenario::sigma_squared(double tau) const {
    const double s = clock_.s_of_tau(tau);
    const double v = base_.sigma().value(s);
    return v * v / clock_.rate(s);
}

double EffectiveScenario::risk(double tau) const { return base_.lambda() * sigma_squared(tau); }

Lagrangian EffectiveScenario::lagrangian() const {
    Lagrangian l;
    l.span = tau_span();
    l.x0 = base_.x0();
    auto self = std::make_shared<const EffectiveScenario>(*this);
    l.impact = [self](double tau) { return self->impact(tau); };
    l.impact_slope = [self](double tau) { return self->impact_slope(tau); };
    l.risk = [self](double tau) { return self->risk(tau); };
    return l;
}

EffectiveScenario transform_scenario(const Clock& clock, const Scenario& scenario) {
    return EffectiveScenario(clock, scenario);
}

Trajectory pull_back_trajectory(const Clock& clock, const Trajectory& tau_trajectory) {
    require_same_span(clock.tau_span(), tau_trajectory.span(), "pull_back_trajectory");
    const Span span = clock.physical_span();
    const Span tau_span = clock.tau_span();
    // Map onto the exact tau endpoints so boundary values survive unchanged.
    auto to_tau = [clock, tau_span](double s) {
        const double t = clock.tau(s);
        return t >= tau_span.end ? tau_span.end : t;
    };
    auto value = [to_tau, x = tau_trajectory](double s) { return x.value(to_tau(s)); };
    auto derivative = [to_tau, clock, x = tau_trajectory](double s) {
        return x.derivative(to_tau(s)) * clock.rate(s);
    };
    Trajectory::Fn second;
    if (tau_trajectory.has_second_derivative()) {
        second = [to_tau, clock, x = tau_trajectory](double s) {
            const double tau = to_tau(s);
            const double r = clock.rate(s);
            return *x.second_derivative(tau) * r * r + x.derivative(tau) * clock.rate_derivative(s);
        };
    }
    std::vector<double> breaks;
    const auto tau_breaks = tau_trajectory.breakpoints();
    for (std::size_t i = 1; i + 1 < tau_breaks.size(); ++i) breaks.push_back(clock.s_of_tau(tau_breaks[i]));
    std::string tag = tau_trajectory.method_tag() + "@" + std::string(to_string(clock.kind()));
    return Trajectory::closed_form(span, value, derivative, second, tau_trajectory.family(), tag,
                                   std::move(breaks));
}

}  // namespace optexec
