#pragma once

#include <span>
#include <vector>

namespace optexec::numerics {

/// Shape-preserving piecewise-cubic Hermite interpolant.
///
/// Knot slopes default to the derivative of the local Lagrange polynomial
/// through up to five neighbouring knots (fourth-order on smooth data), then
/// pass through the Hyman filter: a slope is zeroed at local extrema and
/// clipped to three times the smaller adjacent secant elsewhere. The result
/// is monotone on every interval where the data are monotone, so it never
/// leaves the range spanned by the two bracketing knot values.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    /// `knots` strictly increasing, at least two entries.
    MonotoneCubic(std::vector<double> knots, std::vector<double> values);

    /// Same, with caller-supplied knot slopes (still Hyman-filtered).
    MonotoneCubic(std::vector<double> knots, std::vector<double> values,
                  std::vector<double> slopes);

    double value(double x) const;
    double derivative(double x) const;
    /// Piecewise linear and discontinuous at knots.
    double second_derivative(double x) const;

    std::span<const double> knots() const noexcept { return knots_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> slopes() const noexcept { return slopes_; }
    double front() const noexcept { return knots_.front(); }
    double back() const noexcept { return knots_.back(); }

private:
    std::size_t interval(double x) const;
    void validate() const;
    void filter_slopes();

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    bool uniform_ = false;
};

/// High-order finite-difference slope estimates used by MonotoneCubic.
std::vector<double> lagrange_slopes(std::span<const double> knots, std::span<const double> values);

}  // namespace optexec::numerics
