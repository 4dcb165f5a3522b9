#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optexec/numerics/monotone_cubic.hpp"
#include "optexec/span.hpp"

namespace optexec {

enum class Representation {
    ClosedForm,  ///< evaluable formula (analytic or built from solver dense output)
    Sampled,     ///< uniform grid values joined by a monotone cubic
};

/// An execution schedule x(s) over a span, queryable anywhere in the span.
class Trajectory {
public:
    using Fn = std::function<double(double)>;

    /// `second` may be empty when no analytic second derivative exists.
    /// `breakpoints` lists interior points where the formula is only
    /// piecewise smooth (quadrature splits there).
    static Trajectory closed_form(Span span, Fn value, Fn derivative, Fn second, std::string family,
                                  std::string method_tag, std::vector<double> breakpoints = {});

    /// `values` sit on a uniform grid of values.size() >= 2 points over span.
    static Trajectory sampled(Span span, std::vector<double> values, std::string method_tag);

    /// x = 0 on span.
    static Trajectory zero(Span span, std::string method_tag = "zero");

    double value(double s) const { return value_(s); }
    double derivative(double s) const { return derivative_(s); }
    bool has_second_derivative() const noexcept { return static_cast<bool>(second_); }
    std::optional<double> second_derivative(double s) const {
        if (!second_) return std::nullopt;
        return second_(s);
    }

    const Span& span() const noexcept { return span_; }
    Representation representation() const noexcept { return representation_; }
    const std::string& family() const noexcept { return family_; }
    const std::string& method_tag() const noexcept { return method_tag_; }

    /// Grid values of a sampled trajectory; empty for closed forms.
    std::span<const double> samples() const noexcept;

    /// span.start, interior breakpoints, span.end (ascending).
    std::vector<double> breakpoints() const;

    Trajectory with_method_tag(std::string tag) const;

private:
    Trajectory() = default;

    Span span_{};
    Representation representation_ = Representation::ClosedForm;
    Fn value_;
    Fn derivative_;
    Fn second_;
    std::shared_ptr<const numerics::MonotoneCubic> table_;
    std::vector<double> interior_breaks_;
    std::string family_;
    std::string method_tag_;
};

}  // namespace optexec
