#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "optexec/model_core.hpp"
#include "optexec/scenario.hpp"
#include "optexec/trajectory.hpp"

namespace optexec {

/// Uniform discretization of the cost functional on N intervals:
///   sum eta_{i+1/2} (x_{i+1} - x_i)^2 / h + sum' h lambda sigma_i^2 x_i^2
/// (the primed sum halves the two endpoint terms), with x_0 = x0, x_N = 0.
struct DiscreteProblem {
    std::size_t N = 0;
    double h = 0.0;
    double x0 = 0.0;
    Span span;
    std::vector<double> grid;        ///< N + 1 nodes
    std::vector<double> impact_mid;  ///< eta at the N midpoints
    std::vector<double> risk_node;   ///< lambda sigma^2 at the N + 1 nodes
};

/// Throws std::invalid_argument for N < 2 and Error for non-finite samples.
DiscreteProblem discretize(const Scenario& scenario, std::size_t N);

struct OracleSolution {
    Trajectory trajectory;
    CostReport cost;
    std::vector<double> nodes;  ///< x_0 .. x_N
};

/// Nodal minimizer of the discrete cost (one tridiagonal solve).
std::vector<double> solve_nodes(const DiscreteProblem& problem);

/// Minimizer and discrete cost at N; with `estimate_error` the problem is
/// also solved at 2N and |C_N - C_2N| * 4/3 is reported.
OracleSolution solve_discrete(const Scenario& scenario, std::size_t N, bool estimate_error = true);

struct ConvergenceReport {
    std::vector<std::size_t> Ns;
    std::vector<double> costs;
    std::vector<double> errors;  ///< |C_N - reference|
    double reference = 0.0;      ///< Richardson value from the two finest grids
    double order = 0.0;          ///< least-squares slope of log error vs log h
    bool exact = false;          ///< every error below 1e-13 |reference|; order is then NaN
};

/// Ns ascending with at least three entries.
ConvergenceReport convergence_order(const Scenario& scenario, std::span<const std::size_t> Ns);

}  // namespace optexec
