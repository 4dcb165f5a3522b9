#include "optexec/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace optexec {

std::string_view to_string(Frame frame) {
    return frame == Frame::Physical ? "physical" : "trader";
}

Scenario::Scenario(double t0, double T, double x0, double lambda, CoefficientFunction eta,
                   CoefficientFunction sigma, Frame frame)
    : t0_(t0), T_(T), x0_(x0), lambda_(lambda), eta_(std::move(eta)), sigma_(std::move(sigma)),
      frame_(frame) {
    if (!std::isfinite(t0) || !std::isfinite(T)) throw std::invalid_argument("t0 and T must be finite");
    if (!(T > t0)) throw std::invalid_argument("T must be greater than t0");
    if (!std::isfinite(x0)) throw std::invalid_argument("x0 must be finite");
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw std::invalid_argument("lambda must be finite and nonnegative");
    }
    eta_.require_positive(span(), "eta");
    sigma_.require_positive(span(), "sigma", /*allow_zero=*/true);
}

Scenario Scenario::with_lambda(double lambda) const {
    return Scenario(t0_, T_, x0_, lambda, eta_, sigma_, frame_);
}

Scenario Scenario::with_x0(double x0) const {
    return Scenario(t0_, T_, x0, lambda_, eta_, sigma_, frame_);
}

}  // namespace optexec
