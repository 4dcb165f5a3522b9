#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "optexec/model_core.hpp"
#include "optexec/scenario.hpp"
#include "optexec/trajectory.hpp"

namespace optexec::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kSolverFailed = 3 };

enum class Method { Auto, ClosedForm, Riccati, Oracle };

std::optional<Method> parse_method(std::string_view name);

struct Solved {
    Trajectory trajectory;
    CostReport cost;
};

/// Auto tries the closed form, then the Riccati path on the second-parameter
/// clock, then the oracle with `grid` intervals. Forced methods throw on
/// failure (std::invalid_argument when no closed form matches).
Solved solve_with(const Scenario& scenario, Method method, std::size_t grid);

/// Method cost plus the quadrature split of the same trajectory; the error
/// estimate also covers any gap between the two.
CostReport cost_for_output(const Scenario& scenario, const Solved& solved);

struct SolveOptions {
    std::string scenario;
    Method method = Method::Auto;
    std::size_t grid = 4096;
    std::string out;       ///< empty: standard output
    std::string cost_out;  ///< empty: standard output
};

struct VerifyOptions {
    std::string scenario;
    double tol = 1e-6;
};

struct SweepOptions {
    std::string scenario;
    std::string param = "lambda";
    double from = 0.0;
    double to = 1.0;
    long steps = 2;
    std::string out;  ///< empty: standard output
};

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

/// Parses argv with subcommands solve, verify and sweep and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace optexec::cli
