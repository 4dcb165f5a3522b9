#pragma once

#include <cmath>
#include <stdexcept>

namespace optexec {

/// Closed time interval [start, end] with start < end.
struct Span {
    double start = 0.0;
    double end = 1.0;

    double length() const noexcept { return end - start; }
    bool contains(double t, double slack = 0.0) const noexcept {
        return t >= start - slack && t <= end + slack;
    }
    /// Uniformly spaced point i of n (i = 0 .. n-1), endpoints exact.
    double uniform_point(std::size_t i, std::size_t n) const noexcept {
        if (i + 1 == n) return end;
        return start + length() * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    bool operator==(const Span&) const = default;
};

inline Span make_span(double start, double end) {
    if (!(std::isfinite(start) && std::isfinite(end)) || !(end > start)) {
        throw std::invalid_argument("span requires finite start < end");
    }
    return Span{start, end};
}

}  // namespace optexec
