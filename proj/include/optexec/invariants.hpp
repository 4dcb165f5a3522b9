#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "optexec/span.hpp"
#include "optexec/trajectory.hpp"

namespace optexec {

/// rho(tau0), rho'(tau0)
struct PinneyInit {
    double rho = 1.0;
    double rho_prime = 0.0;
};

/// Positive solution of rho'' = W rho - 1/rho^3 with quintic Hermite dense
/// output (rho'' at the nodes comes from the equation).
class PinneyWitness {
public:
    const Span& span() const noexcept;
    const PinneyInit& init() const noexcept;
    double rho(double tau) const;
    double rho_prime(double tau) const;
    /// Second derivative of the dense output.
    double rho_second(double tau) const;
    double W(double tau) const;
    double max_abs_W() const noexcept;
    std::span<const double> nodes() const noexcept;

    /// Which form of the auxiliary equation was integrated.
    static std::string_view sign_convention() noexcept;

private:
    friend PinneyWitness solve_pinney(std::function<double(double)> W, Span span, std::optional<PinneyInit> init);
    struct Impl;
    explicit PinneyWitness(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// rho = W(tau0)^{-1/4}, rho' = 0 when W(tau0) > 0, else rho = 1, rho' = 1.
PinneyInit default_pinney_init(const std::function<double(double)>& W, const Span& span);

/// Adaptive integration at rel tol 1e-10. Throws PinneyCollapse with the
/// time at which rho fell below 1e-8, std::invalid_argument for rho(tau0) <= 0.
PinneyWitness solve_pinney(std::function<double(double)> W, Span span,
                           std::optional<PinneyInit> init = std::nullopt);

/// I = ((rho x' - x rho')^2 - (x/rho)^2) / 2
inline double ermakov_value(double rho, double rho_prime, double x, double x_prime) {
    const double a = rho * x_prime - x * rho_prime;
    const double b = x / rho;
    return 0.5 * (a * a - b * b);
}

/// ((x')^2 / sqrt(p) - sqrt(p) x^2) / 2, the invariant for constant W = p with rho = p^{-1/4}.
inline double constant_product_energy(double p, double x, double x_prime) {
    const double r = std::sqrt(p);
    return 0.5 * (x_prime * x_prime / r - r * x * x);
}

struct ErmakovReport {
    std::vector<std::pair<double, double>> samples;  ///< (tau, I)
    double median = 0.0;
    double drift = 0.0;  ///< (max I - min I) / (|median I| + 1e-300)
    double residual = 0.0;  ///< sup |x'' - W x| seen by the on-shell check
};

/// Samples I on a uniform grid of `grid_points` (>= 3) over the witness
/// span. The trajectory must share the span and satisfy x'' = W x
/// (sup residual below 1e-4 max(1, max|x|)); OffShellError otherwise.
ErmakovReport ermakov_invariant(const PinneyWitness& witness, const Trajectory& trajectory,
                                std::size_t grid_points);

}  // namespace optexec
