#include "optexec/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "optexec/errors.hpp"
#include "optexec/normal_form.hpp"
#include "optexec/numerics/quadrature.hpp"

namespace optexec {

namespace {

constexpr double kBlowUpThreshold = 1e8;
constexpr std::size_t kPresample = 1025;

std::string fmt(double t) {
    std::ostringstream out;
    out.precision(17);
    out << t;
    return out.str();
}

/// Cubic Hermite pieces on [a, b] in terms of theta = (t - a)/h.
struct HermitePiece {
    double a, h, fa, da, fb, db;

    double value(double theta) const {
        const double t2 = theta * theta, t3 = t2 * theta;
        return (2 * t3 - 3 * t2 + 1) * fa + (t3 - 2 * t2 + theta) * h * da + (-2 * t3 + 3 * t2) * fb +
               (t3 - t2) * h * db;
    }
    double derivative(double theta) const {
        const double t2 = theta * theta;
        return ((6 * t2 - 6 * theta) * (fa - fb)) / h + (3 * t2 - 4 * theta + 1) * da + (3 * t2 - 2 * theta) * db;
    }
    /// int_a^{a + theta h}
    double integral(double theta) const {
        const double t2 = theta * theta, t3 = t2 * theta, t4 = t3 * theta;
        return h * ((0.5 * t4 - t3 + theta) * fa + (0.25 * t4 - 2.0 / 3.0 * t3 + 0.5 * t2) * h * da +
                    (-0.5 * t4 + t3) * fb + (0.25 * t4 - t3 / 3.0) * h * db);
    }
};

numerics::QuadratureOptions segment_options() { return {1e-13, 1e-300, 12}; }

}  // namespace

struct RiccatiSolution::Impl {
    Span span;
    RiccatiCondition condition;
    std::function<double(double)> W;
    std::optional<double> blow_up;
    Span covered;
    double max_W = 0.0;

    // ascending nodes
    std::vector<double> t, F, D;
    std::vector<double> f_node;  // f at nodes, f(covered.start) = 0
    std::vector<double> J_node;  // int_{t_i}^{span.end} e^{-2f}; empty on blow-up
    double J_error = 0.0;

    std::size_t locate(double tau) const {
        if (!(tau >= t.front() - 1e-12 * span.length() && tau <= t.back() + 1e-12 * span.length())) {
            throw SpanMismatch("Riccati dense output queried at tau = " + fmt(tau) + " outside [" +
                               fmt(t.front()) + ", " + fmt(t.back()) + "]");
        }
        const auto it = std::upper_bound(t.begin(), t.end(), tau);
        std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
        return std::min(i, t.size() - 2);
    }
    HermitePiece piece(std::size_t i) const { return {t[i], t[i + 1] - t[i], F[i], D[i], F[i + 1], D[i + 1]}; }
    double theta(std::size_t i, double tau) const {
        return std::clamp((tau - t[i]) / (t[i + 1] - t[i]), 0.0, 1.0);
    }
    double f_at(double tau) const {
        const std::size_t i = locate(tau);
        return f_node[i] + piece(i).integral(theta(i, tau));
    }
};

const Span& RiccatiSolution::span() const noexcept { return impl_->span; }
const RiccatiCondition& RiccatiSolution::condition() const noexcept { return impl_->condition; }
std::optional<double> RiccatiSolution::blow_up() const noexcept { return impl_->blow_up; }
Span RiccatiSolution::covered() const noexcept { return impl_->covered; }
double RiccatiSolution::max_abs_W() const noexcept { return impl_->max_W; }
double RiccatiSolution::J_error_estimate() const noexcept { return impl_->J_error; }
std::span<const double> RiccatiSolution::nodes() const noexcept { return impl_->t; }

double RiccatiSolution::F(double tau) const {
    const std::size_t i = impl_->locate(tau);
    if (tau == impl_->t[i]) return impl_->F[i];
    if (tau == impl_->t[i + 1]) return impl_->F[i + 1];
    return impl_->piece(i).value(impl_->theta(i, tau));
}

double RiccatiSolution::F_derivative(double tau) const {
    const std::size_t i = impl_->locate(tau);
    return impl_->piece(i).derivative(impl_->theta(i, tau));
}

double RiccatiSolution::f(double tau) const { return impl_->f_at(tau); }

double RiccatiSolution::W(double tau) const { return impl_->W(tau); }

double RiccatiSolution::J(double tau) const {
    const Impl& m = *impl_;
    if (m.blow_up) throw RiccatiBlowUp("Riccati solution blew up; J is undefined", *m.blow_up);
    const std::size_t i = m.locate(tau);
    if (tau >= m.t.back()) return 0.0;
    if (tau == m.t[i]) return m.J_node[i];
    auto integrand = [&m](double z) { return std::exp(-2.0 * m.f_at(z)); };
    const double upper = m.t[i + 1];
    return numerics::integrate_adaptive(integrand, std::max(tau, m.t[i]), upper, segment_options()).value +
           m.J_node[i + 1];
}

numerics::OdeOptions riccati_ode_options() {
    numerics::OdeOptions options;
    options.rel_tol = 1e-10;
    options.abs_tol = 1e-12;
    return options;
}

RiccatiSolution solve_riccati(std::function<double(double)> W, Span span, RiccatiCondition condition,
                              const numerics::OdeOptions& options, std::span<const double> breakpoints) {
    if (!(span.end > span.start) || !std::isfinite(span.start) || !std::isfinite(span.end)) {
        throw std::invalid_argument("solve_riccati: span requires finite start < end");
    }
    if (!std::isfinite(condition.value)) throw std::invalid_argument("solve_riccati: non-finite condition value");

    auto checked_W = [&W](double tau) {
        const double w = W(tau);
        if (!std::isfinite(w)) throw Error("non-finite W sample at tau = " + fmt(tau));
        return w;
    };

    auto impl = std::make_shared<RiccatiSolution::Impl>();
    impl->span = span;
    impl->condition = condition;
    impl->W = W;

    double max_W = 0.0;
    for (std::size_t i = 0; i < kPresample; ++i) max_W = std::max(max_W, std::abs(checked_W(span.uniform_point(i, kPresample))));

    numerics::OdeOptions opts = options;
    opts.max_step = std::min({options.max_step, span.length() / 256.0, 0.005 / std::sqrt(1.0 + max_W)});

    const bool backward = condition.kind == RiccatiCondition::Kind::Terminal;
    const double from = backward ? span.end : span.start;
    const double to = backward ? span.start : span.end;

    auto rhs = [&checked_W](double tau, const std::array<double, 1>& y) {
        return std::array<double, 1>{checked_W(tau) - y[0] * y[0]};
    };
    auto stop = [](double, const std::array<double, 1>& y) { return std::abs(y[0]) > kBlowUpThreshold; };
    std::vector<double> ends;
    for (double b : breakpoints) {
        if (b > span.start && b < span.end) ends.push_back(b);
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    if (backward) std::reverse(ends.begin(), ends.end());
    ends.push_back(to);

    numerics::OdeRun<1> run;
    double at = from;
    std::array<double, 1> y{condition.value};
    for (double end : ends) {
        auto piece = numerics::integrate_dopri<1>(rhs, at, end, y, opts, stop);
        const std::size_t skip = run.time.empty() ? 0 : 1;
        run.time.insert(run.time.end(), piece.time.begin() + skip, piece.time.end());
        run.state.insert(run.state.end(), piece.state.begin() + skip, piece.state.end());
        run.slope.insert(run.slope.end(), piece.slope.begin() + skip, piece.slope.end());
        run.status = piece.status;
        run.failed_at = piece.failed_at;
        if (piece.status != numerics::OdeStatus::Completed) break;
        at = end;
        y = run.state.back();
    }

    if (run.status == numerics::OdeStatus::TooManySteps) {
        throw Error("solve_riccati: step budget exhausted near tau = " + fmt(run.time.back()));
    }
    if (run.status == numerics::OdeStatus::Stopped || run.status == numerics::OdeStatus::StepUnderflow) {
        double pole = run.status == numerics::OdeStatus::Stopped ? run.time.back() : run.failed_at;
        if (run.status == numerics::OdeStatus::Stopped) {
            // G = 1/F stays finite through the pole: G' = 1 - W G^2.
            const double g0 = 1.0 / run.state.back()[0];
            const double start = run.time.back();
            auto grhs = [&checked_W](double tau, const std::array<double, 1>& g) {
                return std::array<double, 1>{1.0 - checked_W(tau) * g[0] * g[0]};
            };
            auto crossed = [g0](double, const std::array<double, 1>& g) { return g[0] * g0 <= 0.0; };
            numerics::OdeOptions gopts = opts;
            gopts.abs_tol = 1e-14;
            auto grun = numerics::integrate_dopri<1>(grhs, start, to, {g0}, gopts, crossed);
            if (grun.status == numerics::OdeStatus::Stopped && grun.time.size() >= 2) {
                const std::size_t k = grun.time.size() - 1;
                double lo = grun.time[k - 1], hi = grun.time[k];
                const HermitePiece hp{lo, hi - lo, grun.state[k - 1][0], grun.slope[k - 1][0], grun.state[k][0],
                                      grun.slope[k][0]};
                double a = 0.0, b = 1.0;
                const double sign_a = hp.value(0.0);
                for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
                    const double m = 0.5 * (a + b);
                    if (hp.value(m) * sign_a > 0.0) a = m;
                    else b = m;
                }
                pole = lo + 0.5 * (a + b) * (hi - lo);
            }
        }
        impl->blow_up = pole;
    }

    // Reorder ascending.
    const std::size_t n = run.time.size();
    impl->t.resize(n);
    impl->F.resize(n);
    impl->D.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = backward ? n - 1 - k : k;
        impl->t[k] = run.time[j];
        impl->F[k] = run.state[j][0];
        impl->D[k] = run.slope[j][0];
        max_W = std::max(max_W, std::abs(impl->D[k] + impl->F[k] * impl->F[k]));
    }
    impl->max_W = max_W;
    if (n < 2) throw Error("solve_riccati: integration produced no steps");
    impl->covered = Span{impl->t.front(), impl->t.back()};

    impl->f_node.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) impl->f_node[i + 1] = impl->f_node[i] + impl->piece(i).integral(1.0);

    if (!impl->blow_up) {
        std::vector<double> segment(n - 1, 0.0), seg_error(n - 1, 0.0);
        const RiccatiSolution::Impl& m = *impl;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n - 1); ++i) {
            const auto k = static_cast<std::size_t>(i);
            auto integrand = [&m](double z) { return std::exp(-2.0 * m.f_at(z)); };
            const auto r = numerics::integrate_adaptive(integrand, m.t[k], m.t[k + 1], segment_options());
            segment[k] = r.value;
            seg_error[k] = r.abs_error;
        }
        impl->J_node.assign(n, 0.0);
        for (std::size_t k = n - 1; k-- > 0;) {
            impl->J_node[k] = impl->J_node[k + 1] + segment[k];
            impl->J_error += seg_error[k];
        }
    }
    return RiccatiSolution(std::move(impl));
}

ClosedFormSolution reconstruct(const RiccatiSolution& riccati, double x0, double tau0, double tauF) {
    if (riccati.blow_up()) {
        throw RiccatiBlowUp("Riccati solution diverges at tau = " + fmt(*riccati.blow_up()) +
                                "; reconstruction refused",
                            *riccati.blow_up());
    }
    const Span covered = riccati.covered();
    const double slack = 1e-12 * covered.length();
    if (!(tauF > tau0) || !covered.contains(tau0, slack) || !covered.contains(tauF, slack)) {
        throw SpanMismatch("reconstruct: [" + fmt(tau0) + ", " + fmt(tauF) + "] not covered by the Riccati solution");
    }
    const double J_end = tauF >= covered.end ? 0.0 : riccati.J(tauF);
    auto JF = [riccati, J_end, tauF](double tau) { return tau >= tauF ? 0.0 : riccati.J(tau) - J_end; };
    const double f0 = riccati.f(tau0);
    const double J0 = JF(tau0);
    const double F0 = riccati.F(tau0);
    const double K = x0 / (std::exp(f0) * J0);

    auto value = [riccati, JF, K, x0, tau0, tauF](double tau) {
        if (tau <= tau0) return x0;
        if (tau >= tauF) return 0.0;
        return K * std::exp(riccati.f(tau)) * JF(tau);
    };
    auto derivative = [riccati, value, K](double tau) {
        return riccati.F(tau) * value(tau) - K * std::exp(-riccati.f(tau));
    };
    auto second = [riccati, value, derivative, K](double tau) {
        const double F = riccati.F(tau);
        return riccati.F_derivative(tau) * value(tau) + F * derivative(tau) + K * F * std::exp(-riccati.f(tau));
    };
    auto trajectory =
        Trajectory::closed_form(Span{tau0, tauF}, value, derivative, second, "riccati", "riccati");

    CostReport cost;
    const double boundary = std::exp(-2.0 * f0) / J0;
    cost.total = x0 * x0 * (boundary - F0);
    cost.method_tag = "riccati";
    // J quadrature error enters as x0^2 e^{-2 f0} dJ / J0^2; the ODE at its relative tolerance.
    cost.abs_error_estimate = x0 * x0 * boundary * riccati.J_error_estimate() / J0 + 1e-9 * std::abs(cost.total);
    return {trajectory, cost};
}

RiccatiCoefficient coefficient_W(const Scenario& scenario, RiccatiFrame frame) {
    std::vector<double> physical_breaks = scenario.eta().breakpoints(scenario.span());
    for (double b : scenario.sigma().breakpoints(scenario.span())) physical_breaks.push_back(b);
    std::sort(physical_breaks.begin(), physical_breaks.end());
    physical_breaks.erase(std::unique(physical_breaks.begin(), physical_breaks.end()), physical_breaks.end());
    if (frame == RiccatiFrame::UFrameS) {
        NormalFormPotential V = potential(scenario);
        return {[V](double s) { return V.value(s); }, scenario.span(), std::nullopt, physical_breaks};
    }
    Clock clock = build_clock(ClockKind::SecondParameter, scenario);
    std::vector<double> tau_breaks;
    for (double s : physical_breaks) tau_breaks.push_back(clock.tau(s));
    const double lambda = scenario.lambda();
    if (lambda == 0.0) return {[](double) { return 0.0; }, clock.tau_span(), clock, {}};
    auto W = [clock, scenario, lambda](double tau) {
        const double s = clock.s_of_tau(tau);
        const double sigma = scenario.sigma().value(s);
        return lambda * sigma * sigma * scenario.eta().value(s);
    };
    return {W, clock.tau_span(), clock, tau_breaks};
}

ClosedFormSolution solve_scenario_riccati(const Scenario& scenario, RiccatiFrame frame) {
    const RiccatiCoefficient coefficient = coefficient_W(scenario, frame);
    const RiccatiSolution solution =
        solve_riccati(coefficient.W, coefficient.span, RiccatiCondition::terminal(), riccati_ode_options(),
                      coefficient.breakpoints);
    if (frame == RiccatiFrame::TauFrame) {
        auto in_tau = reconstruct(solution, scenario.x0(), coefficient.span.start, coefficient.span.end);
        auto trajectory = pull_back_trajectory(*coefficient.clock, in_tau.trajectory);
        in_tau.cost.method_tag = "riccati:tau_frame";
        return {trajectory.with_method_tag("riccati:tau_frame"), in_tau.cost};
    }
    const double eta0 = scenario.eta().value(scenario.t0());
    const double u0 = scenario.x0() * std::sqrt(eta0);
    auto in_u = reconstruct(solution, u0, scenario.t0(), scenario.T());
    auto trajectory = u_to_x(in_u.trajectory, scenario.eta()).with_method_tag("riccati:u_frame");
    CostReport cost = in_u.cost;
    cost.total += u0 * u0 * scenario.eta().derivative(scenario.t0()) / (2.0 * eta0);
    cost.method_tag = "riccati:u_frame";
    return {trajectory, cost};
}

}  // namespace optexec
