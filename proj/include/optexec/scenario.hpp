#pragma once

#include <string_view>

#include "optexec/coefficient.hpp"
#include "optexec/span.hpp"

namespace optexec {

/// Documentation tag only: whether the coefficients are authored in
/// physical time or in a trader clock. Solvers ignore it.
enum class Frame { Physical, Trader };

std::string_view to_string(Frame frame);

/// A complete liquidation problem: minimise
///   C[x] = int_{t0}^{T} eta(s) x'(s)^2 + lambda sigma(s)^2 x(s)^2 ds
/// subject to x(t0) = x0, x(T) = 0.
///
/// Construction validates T > t0, lambda >= 0, eta > 0 and sigma >= 0 on
/// the span; a failed check throws std::invalid_argument.
class Scenario {
public:
    Scenario(double t0, double T, double x0, double lambda, CoefficientFunction eta,
             CoefficientFunction sigma, Frame frame = Frame::Physical);

    double t0() const noexcept { return t0_; }
    double T() const noexcept { return T_; }
    double x0() const noexcept { return x0_; }
    double lambda() const noexcept { return lambda_; }
    const CoefficientFunction& eta() const noexcept { return eta_; }
    const CoefficientFunction& sigma() const noexcept { return sigma_; }
    Frame frame() const noexcept { return frame_; }
    Span span() const noexcept { return Span{t0_, T_}; }

    /// lambda * sigma(s)^2
    double risk_weight(double s) const {
        const double v = sigma_.value(s);
        return lambda_ * v * v;
    }

    Scenario with_lambda(double lambda) const;
    Scenario with_x0(double x0) const;

private:
    double t0_;
    double T_;
    double x0_;
    double lambda_;
    CoefficientFunction eta_;
    CoefficientFunction sigma_;
    Frame frame_;
};

}  // namespace optexec
