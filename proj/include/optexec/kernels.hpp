#pragma once

#include <functional>
#include <span>
#include <vector>

/// Data-parallel inner loops of the solvers. Each kernel has an OpenMP
/// implementation (namespace kernels) and a plain serial reference
/// (namespace kernels::serial) that must produce bit-identical output;
/// floating-point sums are always accumulated serially in index order.
namespace optexec::kernels {

using ScalarFn = std::function<double(double)>;

/// Interior system of the discretized cost functional.
struct OracleSystem {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> rhs;
};

/// out[i] = fn(points[i]).
void sample(const ScalarFn& fn, std::span<const double> points, std::span<double> out);

/// Stationarity system for the interior nodes 1..N-1 given midpoint impact
/// weights (size N) and node risk weights lambda*sigma^2 (size N+1).
OracleSystem assemble_oracle_system(std::span<const double> impact_mid,
                                    std::span<const double> risk_node, double h, double x0);

/// sum eta_{i+1/2} (x_{i+1}-x_i)^2 / h  +  trapezoid sum of h * risk_i * x_i^2,
/// returned as {impact, risk}.
std::pair<double, double> discrete_cost(std::span<const double> x,
                                        std::span<const double> impact_mid,
                                        std::span<const double> risk_node, double h);

/// max_i |a[i]|
double max_abs(std::span<const double> a);

namespace serial {
void sample(const ScalarFn& fn, std::span<const double> points, std::span<double> out);
OracleSystem assemble_oracle_system(std::span<const double> impact_mid,
                                    std::span<const double> risk_node, double h, double x0);
std::pair<double, double> discrete_cost(std::span<const double> x,
                                        std::span<const double> impact_mid,
                                        std::span<const double> risk_node, double h);
double max_abs(std::span<const double> a);
}  // namespace serial

/// Uniform grid of n points over [a, b] with exact endpoints.
std::vector<double> uniform_grid(double a, double b, std::size_t n);

}  // namespace optexec::kernels
