#pragma once

#include <span>
#include <vector>

namespace optexec::numerics {

/// Thomas elimination for a tridiagonal system. `lower` and `upper` hold
/// the n-1 off-diagonal entries (lower[i] couples rows i+1 and i). Stable
/// without pivoting for the diagonally dominant SPD systems produced by
/// the variational oracle.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace optexec::numerics
