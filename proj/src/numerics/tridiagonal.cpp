#include "optexec/numerics/tridiagonal.hpp"

#include <stdexcept>

namespace optexec::numerics {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return {};
    if (rhs.size() != n || lower.size() + 1 != n || upper.size() + 1 != n) {
        throw std::invalid_argument("tridiagonal: inconsistent band sizes");
    }
    std::vector<double> c(n), d(n);
    double denom = diag[0];
    if (denom == 0.0) throw std::domain_error("tridiagonal: zero pivot");
    c[0] = n > 1 ? upper[0] / denom : 0.0;
    d[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i - 1] * c[i - 1];
        if (denom == 0.0) throw std::domain_error("tridiagonal: zero pivot");
        c[i] = i + 1 < n ? upper[i] / denom : 0.0;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / denom;
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

}  // namespace optexec::numerics
