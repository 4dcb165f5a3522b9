#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace optexec::numerics {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 2'000'000;
};

enum class OdeStatus { Completed, Stopped, StepUnderflow, TooManySteps };

/// Accepted nodes of an integration run, in integration order (decreasing
/// time for backward runs). `slope` holds the right-hand side at each node.
template <std::size_t N>
struct OdeRun {
    using State = std::array<double, N>;
    std::vector<double> time;
    std::vector<State> state;
    std::vector<State> slope;
    OdeStatus status = OdeStatus::Completed;
    /// Last attempted (not accepted) step end when the run stopped early.
    double failed_at = std::numeric_limits<double>::quiet_NaN();
};

/// Adaptive Dormand-Prince 5(4) integration of y' = rhs(t, y) from t0 to t1
/// (t1 < t0 integrates backward). After every accepted step `stop(t, y)` is
/// consulted; returning true ends the run with status Stopped.
template <std::size_t N, class Rhs, class Stop>
OdeRun<N> integrate_dopri(const Rhs& rhs, double t0, double t1, std::array<double, N> y0,
                          const OdeOptions& options, const Stop& stop) {
    using State = std::array<double, N>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    OdeRun<N> run;
    const double direction = t1 >= t0 ? 1.0 : -1.0;
    const double length = std::abs(t1 - t0);
    double t = t0;
    State y = y0;
    State k1 = rhs(t, y);
    run.time.push_back(t);
    run.state.push_back(y);
    run.slope.push_back(k1);
    if (length == 0.0) return run;

    double h = std::min(options.max_step, length / 100.0);
    long steps = 0;
    auto axpy = [](const State& base, double h, std::initializer_list<std::pair<double, const State*>> terms) {
        State out = base;
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (const auto& [coef, k] : terms) acc += coef * (*k)[i];
            out[i] += h * acc;
        }
        return out;
    };

    while (direction * (t1 - t) > 0.0) {
        if (++steps > options.max_steps) {
            run.status = OdeStatus::TooManySteps;
            return run;
        }
        const double remaining = std::abs(t1 - t);
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        }
        const double hs = direction * h;
        const State k2 = rhs(t + c2 * hs, axpy(y, hs, {{a21, &k1}}));
        const State k3 = rhs(t + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(t + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 =
            rhs(t + c5 * hs, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = rhs(t + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State y_new = axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const double t_new = last ? t1 : t + hs;
        const State k7 = rhs(t_new, y_new);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = options.abs_tol + options.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err += (e / scale) * (e / scale);
            finite = finite && std::isfinite(y_new[i]) && std::isfinite(k7[i]);
        }
        err = std::sqrt(err / static_cast<double>(N));
        if (!finite || !std::isfinite(err)) {
            h *= 0.25;
            if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
                run.status = OdeStatus::StepUnderflow;
                run.failed_at = t + hs;
                return run;
            }
            continue;
        }
        if (err <= 1.0) {
            t = t_new;
            y = y_new;
            k1 = k7;
            run.time.push_back(t);
            run.state.push_back(y);
            run.slope.push_back(k1);
            if (stop(t, y)) {
                run.status = OdeStatus::Stopped;
                return run;
            }
            const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h = std::min(options.max_step, h * factor);
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
                run.status = OdeStatus::StepUnderflow;
                run.failed_at = t + direction * h;
                return run;
            }
        }
    }
    return run;
}

}  // namespace optexec::numerics
