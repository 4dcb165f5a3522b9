#include "optexec/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <stdexcept>

namespace optexec::kernels {

namespace {

void check_oracle_sizes(std::span<const double> impact_mid, std::span<const double> risk_node) {
    if (impact_mid.size() < 2 || risk_node.size() != impact_mid.size() + 1) {
        throw std::invalid_argument("oracle kernels: need N >= 2 midpoints and N+1 nodes");
    }
}

double sum_in_order(const std::vector<double>& terms) {
    double total = 0.0;
    for (double t : terms) total += t;
    return total;
}

}  // namespace

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    std::vector<double> grid(n);
    if (n == 0) return grid;
    if (n == 1) {
        grid[0] = a;
        return grid;
    }
    const double step = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = a + step * static_cast<double>(i);
    grid[n - 1] = b;
    return grid;
}

void sample(const ScalarFn& fn, std::span<const double> points, std::span<double> out) {
    if (out.size() != points.size()) throw std::invalid_argument("sample: size mismatch");
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = fn(points[i]);
        } catch (...) {
#pragma omp critical(optexec_sample_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

OracleSystem assemble_oracle_system(std::span<const double> impact_mid,
                                    std::span<const double> risk_node, double h, double x0) {
    check_oracle_sizes(impact_mid, risk_node);
    const std::size_t interior = impact_mid.size() - 1;
    OracleSystem sys;
    sys.lower.resize(interior - 1);
    sys.upper.resize(interior - 1);
    sys.diag.resize(interior);
    sys.rhs.assign(interior, 0.0);
    const auto n = static_cast<std::ptrdiff_t>(interior);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::size_t i = static_cast<std::size_t>(k) + 1;  // grid node
        sys.diag[k] = impact_mid[i - 1] + impact_mid[i] + h * h * risk_node[i];
        if (k + 1 < n) {
            sys.upper[k] = -impact_mid[i];
            sys.lower[k] = -impact_mid[i];
        }
    }
    sys.rhs[0] = impact_mid[0] * x0;
    return sys;
}

std::pair<double, double> discrete_cost(std::span<const double> x,
                                        std::span<const double> impact_mid,
                                        std::span<const double> risk_node, double h) {
    check_oracle_sizes(impact_mid, risk_node);
    if (x.size() != risk_node.size()) throw std::invalid_argument("discrete_cost: size mismatch");
    const std::size_t nodes = x.size();
    std::vector<double> impact(nodes - 1), risk(nodes);
    const auto n = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        if (i + 1 < nodes) {
            const double dx = x[i + 1] - x[i];
            impact[i] = impact_mid[i] * dx * dx / h;
        }
        const double weight = (i == 0 || i + 1 == nodes) ? 0.5 * h : h;
        risk[i] = weight * risk_node[i] * x[i] * x[i];
    }
    return {sum_in_order(impact), sum_in_order(risk)};
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

namespace serial {

void sample(const ScalarFn& fn, std::span<const double> points, std::span<double> out) {
    if (out.size() != points.size()) throw std::invalid_argument("sample: size mismatch");
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = fn(points[i]);
}

OracleSystem assemble_oracle_system(std::span<const double> impact_mid,
                                    std::span<const double> risk_node, double h, double x0) {
    check_oracle_sizes(impact_mid, risk_node);
    const std::size_t interior = impact_mid.size() - 1;
    OracleSystem sys;
    sys.rhs.assign(interior, 0.0);
    for (std::size_t i = 1; i <= interior; ++i) {
        sys.diag.push_back(impact_mid[i - 1] + impact_mid[i] + h * h * risk_node[i]);
        if (i < interior) {
            sys.upper.push_back(-impact_mid[i]);
            sys.lower.push_back(-impact_mid[i]);
        }
    }
    sys.rhs[0] = impact_mid[0] * x0;
    return sys;
}

std::pair<double, double> discrete_cost(std::span<const double> x,
                                        std::span<const double> impact_mid,
                                        std::span<const double> risk_node, double h) {
    check_oracle_sizes(impact_mid, risk_node);
    if (x.size() != risk_node.size()) throw std::invalid_argument("discrete_cost: size mismatch");
    double impact = 0.0, risk = 0.0;
    const std::size_t nodes = x.size();
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
        const double dx = x[i + 1] - x[i];
        impact += impact_mid[i] * dx * dx / h;
    }
    for (std::size_t i = 0; i < nodes; ++i) {
        const double weight = (i == 0 || i + 1 == nodes) ? 0.5 * h : h;
        risk += weight * risk_node[i] * x[i] * x[i];
    }
    return {impact, risk};
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace serial
}  // namespace optexec::kernels
