#include "optexec/numerics/monotone_cubic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace optexec::numerics {

std::vector<double> lagrange_slopes(std::span<const double> knots, std::span<const double> values) {
    const std::size_t n = knots.size();
    std::vector<double> slopes(n, 0.0);
    if (n < 2) return slopes;
    const std::size_t width = std::min<std::size_t>(5, n);
    for (std::size_t i = 0; i < n; ++i) {
        // Window [lo, lo + width) centred on i where possible.
        std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
        lo = std::min(lo, n - width);
        const double xi = knots[i];
        double d = 0.0;
        for (std::size_t j = lo; j < lo + width; ++j) {
            double weight;
            if (j == i) {
                weight = 0.0;
                for (std::size_t k = lo; k < lo + width; ++k) {
                    if (k != i) weight += 1.0 / (xi - knots[k]);
                }
            } else {
                double num = 1.0, den = 1.0;
                for (std::size_t k = lo; k < lo + width; ++k) {
                    if (k == j) continue;
                    den *= knots[j] - knots[k];
                    if (k != i) num *= xi - knots[k];
                }
                weight = num / den;
            }
            d += weight * values[j];
        }
        slopes[i] = d;
    }
    return slopes;
}

MonotoneCubic::MonotoneCubic(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    validate();
    slopes_ = lagrange_slopes(knots_, values_);
    filter_slopes();
}

MonotoneCubic::MonotoneCubic(std::vector<double> knots, std::vector<double> values,
                             std::vector<double> slopes)
    : knots_(std::move(knots)), values_(std::move(values)), slopes_(std::move(slopes)) {
    validate();
    if (slopes_.size() != knots_.size()) {
        throw std::invalid_argument("monotone cubic: slope count must match knot count");
    }
    filter_slopes();
}

void MonotoneCubic::validate() const {
    if (knots_.size() < 2 || knots_.size() != values_.size()) {
        throw std::invalid_argument("monotone cubic: need at least two knots and matching values");
    }
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) {
            throw std::invalid_argument("monotone cubic: non-finite knot or value");
        }
        if (i > 0 && !(knots_[i] > knots_[i - 1])) {
            throw std::invalid_argument("monotone cubic: knots must be strictly increasing");
        }
    }
}

void MonotoneCubic::filter_slopes() {
    const std::size_t n = knots_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        secant[i] = (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
    }
    auto clip = [](double slope, double s_left, double s_right) {
        if (!(s_left * s_right > 0.0)) return 0.0;
        const double sign = s_right > 0.0 ? 1.0 : -1.0;
        const double bound = 3.0 * std::min(std::abs(s_left), std::abs(s_right));
        return sign * std::min(std::max(0.0, sign * slope), bound);
    };
    slopes_[0] = clip(slopes_[0], secant[0], secant[0]);
    slopes_[n - 1] = clip(slopes_[n - 1], secant[n - 2], secant[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        slopes_[i] = clip(slopes_[i], secant[i - 1], secant[i]);
    }

    const double h0 = knots_[1] - knots_[0];
    uniform_ = true;
    for (std::size_t i = 1; i + 1 < n && uniform_; ++i) {
        uniform_ = std::abs((knots_[i + 1] - knots_[i]) - h0) <= 1e-12 * h0;
    }
}

std::size_t MonotoneCubic::interval(double x) const {
    const std::size_t last = knots_.size() - 2;
    if (x <= knots_.front()) return 0;
    if (x >= knots_.back()) return last;
    std::size_t i;
    if (uniform_) {
        const double h = (knots_.back() - knots_.front()) / static_cast<double>(knots_.size() - 1);
        i = std::min(last, static_cast<std::size_t>((x - knots_.front()) / h));
        // Rounding in the division can land one cell off.
        if (x < knots_[i] && i > 0) --i;
        else if (x > knots_[i + 1] && i < last) ++i;
    } else {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        i = std::min(last, static_cast<std::size_t>(it - knots_.begin()) - 1);
    }
    return i;
}

double MonotoneCubic::value(double x) const {
    const std::size_t i = interval(x);
    const double h = knots_[i + 1] - knots_[i];
    const double t = (x - knots_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] + h11 * h * slopes_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = knots_[i + 1] - knots_[i];
    const double t = (x - knots_[i]) / h;
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h;
    const double d11 = 3 * t2 - 2 * t;
    return d00 * values_[i] + d10 * slopes_[i] + d01 * values_[i + 1] + d11 * slopes_[i + 1];
}

double MonotoneCubic::second_derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = knots_[i + 1] - knots_[i];
    const double t = (x - knots_[i]) / h;
    const double e00 = (12 * t - 6) / (h * h);
    const double e10 = (6 * t - 4) / h;
    const double e01 = (-12 * t + 6) / (h * h);
    const double e11 = (6 * t - 2) / h;
    return e00 * values_[i] + e10 * slopes_[i] + e01 * values_[i + 1] + e11 * slopes_[i + 1];
}

}  // namespace optexec::numerics
