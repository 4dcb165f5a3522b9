#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "optexec/errors.hpp"

namespace optexec::numerics {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_levels = 20;  ///< bisection depth limit per initial panel
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int level;
    bool roundoff = false;  ///< error estimate sits at the rounding floor
    bool operator<(const Panel& other) const { return error < other.error; }
};

/// One G7K15 evaluation with the QUADPACK error heuristic.
template <class F>
Panel gauss_kronrod15(const F& f, double a, double b, int level) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = f(center);
    double kronrod = f_center * kKronrodWeights[7];
    double gauss = f_center * kGaussWeights[3];
    double abs_kronrod = std::abs(kronrod);
    std::array<double, 7> f_left{}, f_right{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        f_left[j] = f(center - dx);
        f_right[j] = f(center + dx);
        const double pair = f_left[j] + f_right[j];
        kronrod += kKronrodWeights[j] * pair;
        abs_kronrod += kKronrodWeights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    const double mean = kronrod * 0.5;
    double asc = kKronrodWeights[7] * std::abs(f_center - mean);
    for (int j = 0; j < 7; ++j) {
        asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
    }
    const double value = kronrod * half;
    const double abs_value = abs_kronrod * std::abs(half);
    asc *= std::abs(half);
    double error = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    bool roundoff = false;
    if (abs_value > std::numeric_limits<double>::min() / (50.0 * eps)) {
        const double floor = 50.0 * eps * abs_value;
        roundoff = error <= floor;
        error = std::max(floor, error);
    }
    return Panel{a, b, value, error, level, roundoff};
}

}  // namespace detail

/// Globally adaptive G7K15 quadrature over the partition given by
/// `breakpoints` (ascending, at least two entries). The worst panel is
/// bisected until the summed error estimate meets
/// max(abs_tol, rel_tol * |value|) or every remaining panel has reached
/// `max_levels` or its rounding floor. Panels at the rounding floor are not
/// split further and count as converged. Never throws for non-convergence;
/// check `converged`.
template <class F>
QuadratureResult integrate_adaptive(const F& f, std::span<const double> breakpoints,
                                    const QuadratureOptions& options = {}) {
    if (breakpoints.size() < 2) {
        throw std::invalid_argument("quadrature needs at least two breakpoints");
    }
    std::priority_queue<detail::Panel> active;
    std::vector<detail::Panel> frozen;
    QuadratureResult result;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i]) continue;
        auto panel = detail::gauss_kronrod15(f, breakpoints[i], breakpoints[i + 1], 0);
        result.evaluations += 15;
        value += panel.value;
        error += panel.error;
        active.push(panel);
    }
    if (!std::isfinite(value)) {
        result.value = value;
        result.abs_error = std::numeric_limits<double>::infinity();
        result.converged = false;
        return result;
    }
    while (!active.empty()) {
        const double tol = std::max(options.abs_tol, options.rel_tol * std::abs(value));
        if (error <= tol) break;
        auto worst = active.top();
        active.pop();
        if (worst.level >= options.max_levels || worst.roundoff) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gauss_kronrod15(f, worst.a, mid, worst.level + 1);
        auto right = detail::gauss_kronrod15(f, mid, worst.b, worst.level + 1);
        result.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
    }
    // Re-sum from the panels to shed drift from incremental updates.
    double sum = 0.0, err = 0.0, resolvable = 0.0;
    std::vector<detail::Panel> panels = std::move(frozen);
    while (!active.empty()) {
        panels.push_back(active.top());
        active.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& l, const detail::Panel& r) { return l.a < r.a; });
    for (const auto& p : panels) {
        sum += p.value;
        err += p.error;
        if (!p.roundoff) resolvable += p.error;
    }
    result.value = sum;
    result.abs_error = err;
    result.converged =
        std::isfinite(sum) && resolvable <= std::max(options.abs_tol, options.rel_tol * std::abs(sum));
    return result;
}

template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    const QuadratureOptions& options = {}) {
    const std::array<double, 2> ends{a, b};
    return integrate_adaptive(f, std::span<const double>(ends), options);
}

/// Like integrate_adaptive, but throws QuadratureError (carrying the best
/// estimate) when the tolerance cannot be met.
template <class F>
QuadratureResult integrate(const F& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {}) {
    auto result = integrate_adaptive(f, breakpoints, options);
    if (!result.converged) {
        throw QuadratureError("adaptive quadrature did not converge after " +
                                  std::to_string(options.max_levels) + " refinement levels",
                              result.value, result.abs_error);
    }
    return result;
}

template <class F>
QuadratureResult integrate(const F& f, double a, double b, const QuadratureOptions& options = {}) {
    const std::array<double, 2> ends{a, b};
    return integrate(f, std::span<const double>(ends), options);
}

}  // namespace optexec::numerics
