#include "optexec/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

#include "optexec/kernels.hpp"

namespace optexec {

Trajectory Trajectory::closed_form(Span span, Fn value, Fn derivative, Fn second, std::string family,
                                   std::string method_tag, std::vector<double> breakpoints) {
    if (!value || !derivative) throw std::invalid_argument("trajectory: value and derivative required");
    Trajectory t;
    t.span_ = span;
    t.representation_ = Representation::ClosedForm;
    t.value_ = std::move(value);
    t.derivative_ = std::move(derivative);
    t.second_ = std::move(second);
    t.family_ = std::move(family);
    t.method_tag_ = std::move(method_tag);
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double b : breakpoints) {
        if (b > span.start && b < span.end) t.interior_breaks_.push_back(b);
    }
    return t;
}

Trajectory Trajectory::sampled(Span span, std::vector<double> values, std::string method_tag) {
    if (values.size() < 2) throw std::invalid_argument("sampled trajectory needs at least two values");
    auto grid = kernels::uniform_grid(span.start, span.end, values.size());
    auto table = std::make_shared<const numerics::MonotoneCubic>(grid, std::move(values));
    Trajectory t;
    t.span_ = span;
    t.representation_ = Representation::Sampled;
    t.table_ = table;
    t.value_ = [table](double s) { return table->value(s); };
    t.derivative_ = [table](double s) { return table->derivative(s); };
    t.family_ = "sampled";
    t.method_tag_ = std::move(method_tag);
    t.interior_breaks_.assign(grid.begin() + 1, grid.end() - 1);
    return t;
}

Trajectory Trajectory::zero(Span span, std::string method_tag) {
    auto zero = [](double) { return 0.0; };
    return closed_form(span, zero, zero, zero, "zero", std::move(method_tag));
}

std::span<const double> Trajectory::samples() const noexcept {
    if (!table_) return {};
    return table_->values();
}

std::vector<double> Trajectory::breakpoints() const {
    std::vector<double> out;
    out.reserve(interior_breaks_.size() + 2);
    out.push_back(span_.start);
    out.insert(out.end(), interior_breaks_.begin(), interior_breaks_.end());
    out.push_back(span_.end);
    return out;
}

Trajectory Trajectory::with_method_tag(std::string tag) const {
    Trajectory t = *this;
    t.method_tag_ = std::move(tag);
    return t;
}

}  // namespace optexec
