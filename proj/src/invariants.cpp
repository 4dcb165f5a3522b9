#include "optexec/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "optexec/errors.hpp"
#include "optexec/kernels.hpp"
#include "optexec/model_core.hpp"
#include "optexec/numerics/ode.hpp"

namespace optexec {

namespace {

constexpr double kCollapse = 1e-8;

std::string fmt(double t) {
    std::ostringstream out;
    out.precision(17);
    out << t;
    return out.str();
}

/// Quintic through (p, v, a) at both ends, in theta = (t - a)/h.
struct QuinticPiece {
    std::array<double, 6> c;
    double h;

    QuinticPiece(double hh, double p0, double v0, double a0, double p1, double v1, double a1) : h(hh) {
        const double hv0 = h * v0, hv1 = h * v1, ha0 = h * h * a0, ha1 = h * h * a1;
        c = {p0,
             hv0,
             0.5 * ha0,
             -10 * p0 - 6 * hv0 - 1.5 * ha0 + 10 * p1 - 4 * hv1 + 0.5 * ha1,
             15 * p0 + 8 * hv0 + 1.5 * ha0 - 15 * p1 + 7 * hv1 - ha1,
             -6 * p0 - 3 * hv0 - 0.5 * ha0 + 6 * p1 - 3 * hv1 + 0.5 * ha1};
    }
    double value(double t) const { return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5])))); }
    double derivative(double t) const {
        return (c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])))) / h;
    }
    double second(double t) const { return (2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]))) / (h * h); }
};

}  // namespace

struct PinneyWitness::Impl {
    Span span;
    PinneyInit init;
    std::function<double(double)> W;
    double max_W = 0.0;
    std::vector<double> t;
    std::vector<std::array<double, 2>> y;  // rho, rho'
    std::vector<double> acc;               // rho''

    std::pair<QuinticPiece, double> at(double tau) const {
        const double slack = 1e-12 * span.length();
        if (!span.contains(tau, slack)) {
            throw SpanMismatch("Pinney witness queried at tau = " + fmt(tau) + " outside its span");
        }
        auto it = std::upper_bound(t.begin(), t.end(), tau);
        std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
        i = std::min(i, t.size() - 2);
        const double h = t[i + 1] - t[i];
        QuinticPiece piece(h, y[i][0], y[i][1], acc[i], y[i + 1][0], y[i + 1][1], acc[i + 1]);
        return {piece, std::clamp((tau - t[i]) / h, 0.0, 1.0)};
    }
};

const Span& PinneyWitness::span() const noexcept { return impl_->span; }
const PinneyInit& PinneyWitness::init() const noexcept { return impl_->init; }
double PinneyWitness::W(double tau) const { return impl_->W(tau); }
double PinneyWitness::max_abs_W() const noexcept { return impl_->max_W; }
std::span<const double> PinneyWitness::nodes() const noexcept { return impl_->t; }

double PinneyWitness::rho(double tau) const {
    const auto [piece, theta] = impl_->at(tau);
    return piece.value(theta);
}
double PinneyWitness::rho_prime(double tau) const {
    const auto [piece, theta] = impl_->at(tau);
    return piece.derivative(theta);
}
double PinneyWitness::rho_second(double tau) const {
    const auto [piece, theta] = impl_->at(tau);
    return piece.second(theta);
}

std::string_view PinneyWitness::sign_convention() noexcept {
    return "integrated rho'' = W rho - 1/rho^3, under which I is conserved for x'' = W x; "
           "the form rho'' + W rho - 1/rho^3 = 0 agrees with it only at a constant-W equilibrium";
}

PinneyInit default_pinney_init(const std::function<double(double)>& W, const Span& span) {
    const double w0 = W(span.start);
    if (!std::isfinite(w0)) throw Error("Pinney: non-finite W at tau = " + fmt(span.start));
    if (w0 > 0.0) return {std::pow(w0, -0.25), 0.0};
    return {1.0, 1.0};
}

PinneyWitness solve_pinney(std::function<double(double)> W, Span span, std::optional<PinneyInit> init) {
    if (!(span.end > span.start)) throw std::invalid_argument("solve_pinney: span requires start < end");
    const PinneyInit start = init ? *init : default_pinney_init(W, span);
    if (!(start.rho > 0.0) || !std::isfinite(start.rho) || !std::isfinite(start.rho_prime)) {
        throw std::invalid_argument("solve_pinney: need finite rho(tau0) > 0 and rho'(tau0)");
    }

    auto impl = std::make_shared<PinneyWitness::Impl>();
    impl->span = span;
    impl->init = start;
    impl->W = W;

    double max_W = 0.0;
    for (std::size_t i = 0; i < 1025; ++i) {
        const double tau = span.uniform_point(i, 1025);
        const double w = W(tau);
        if (!std::isfinite(w)) throw Error("Pinney: non-finite W at tau = " + fmt(tau));
        max_W = std::max(max_W, std::abs(w));
    }
    impl->max_W = max_W;

    auto rhs = [&W](double tau, const std::array<double, 2>& y) {
        const double r = y[0];
        return std::array<double, 2>{y[1], W(tau) * r - 1.0 / (r * r * r)};
    };
    auto collapse = [](double, const std::array<double, 2>& y) { return y[0] < kCollapse; };
    numerics::OdeOptions options;
    options.rel_tol = 1e-10;
    options.abs_tol = 1e-12;
    options.max_step = std::min(span.length() / 256.0, 0.05 / std::sqrt(1.0 + max_W));
    const auto run = numerics::integrate_dopri<2>(rhs, span.start, span.end, {start.rho, start.rho_prime}, options, collapse);

    switch (run.status) {
        case numerics::OdeStatus::Completed: break;
        case numerics::OdeStatus::Stopped:
            throw PinneyCollapse("Pinney witness collapsed (rho < 1e-8) at tau = " + fmt(run.time.back()),
                                 run.time.back());
        case numerics::OdeStatus::StepUnderflow:
            throw PinneyCollapse("Pinney witness collapsed near tau = " + fmt(run.failed_at), run.failed_at);
        case numerics::OdeStatus::TooManySteps:
            throw Error("solve_pinney: step budget exhausted near tau = " + fmt(run.time.back()));
    }
    impl->t = run.time;
    impl->y = run.state;
    impl->acc.reserve(run.slope.size());
    for (const auto& s : run.slope) impl->acc.push_back(s[1]);
    return PinneyWitness(std::move(impl));
}

ErmakovReport ermakov_invariant(const PinneyWitness& witness, const Trajectory& trajectory,
                                std::size_t grid_points) {
    if (grid_points < 3) throw std::invalid_argument("ermakov_invariant: need at least 3 grid points");
    require_same_span(witness.span(), trajectory.span(), "ermakov_invariant");
    const Span span = witness.span();
    const auto grid = kernels::uniform_grid(span.start, span.end, grid_points);
    const double h = grid[1] - grid[0];

    std::vector<double> x(grid_points), residual(grid_points, 0.0), I(grid_points);
    kernels::sample([&trajectory](double s) { return trajectory.value(s); }, grid, x);
    kernels::sample(
        [&](double s) {
            if (s <= span.start || s >= span.end) return 0.0;
            double second;
            if (auto d2 = trajectory.second_derivative(s)) {
                second = *d2;
            } else {
                second = (trajectory.value(s + h) - 2.0 * trajectory.value(s) + trajectory.value(s - h)) / (h * h);
            }
            return second - witness.W(s) * trajectory.value(s);
        },
        grid, residual);
    const double sup = kernels::max_abs(residual);
    const double scale = std::max(1.0, kernels::max_abs(x));
    if (!(sup < 1e-4 * scale)) {
        throw OffShellError("ermakov_invariant: trajectory does not satisfy x'' = W x (residual " + fmt(sup) + ")", sup);
    }
    kernels::sample(
        [&](double s) {
            return ermakov_value(witness.rho(s), witness.rho_prime(s), trajectory.value(s), trajectory.derivative(s));
        },
        grid, I);

    ErmakovReport report;
    report.residual = sup;
    report.samples.reserve(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) report.samples.emplace_back(grid[i], I[i]);
    std::vector<double> sorted = I;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    report.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    report.drift = (sorted.back() - sorted.front()) / (std::abs(report.median) + 1e-300);
    return report;
}

}  // namespace optexec
