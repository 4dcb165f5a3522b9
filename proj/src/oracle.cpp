#include "optexec/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "optexec/errors.hpp"
#include "optexec/kernels.hpp"
#include "optexec/numerics/tridiagonal.hpp"

namespace optexec {

namespace {

void require_finite(std::span<const double> values, const std::vector<double>& at, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(std::string("oracle: non-finite ") + what + " sample at s = " + std::to_string(at[i]));
        }
    }
}

}  // namespace

DiscreteProblem discretize(const Scenario& scenario, std::size_t N) {
    if (N < 2) throw std::invalid_argument("oracle: N must be at least 2");
    DiscreteProblem p;
    p.N = N;
    p.span = scenario.span();
    p.x0 = scenario.x0();
    p.h = p.span.length() / static_cast<double>(N);
    p.grid = kernels::uniform_grid(p.span.start, p.span.end, N + 1);
    std::vector<double> mids(N);
    for (std::size_t i = 0; i < N; ++i) mids[i] = 0.5 * (p.grid[i] + p.grid[i + 1]);

    p.impact_mid.resize(N);
    p.risk_node.resize(N + 1);
    const auto& eta = scenario.eta();
    kernels::sample([&eta](double s) { return eta.value(s); }, mids, p.impact_mid);
    kernels::sample([&scenario](double s) { return scenario.risk_weight(s); }, p.grid, p.risk_node);
    require_finite(p.impact_mid, mids, "eta");
    require_finite(p.risk_node, p.grid, "lambda sigma^2");
    return p;
}

std::vector<double> solve_nodes(const DiscreteProblem& problem) {
    const auto sys = kernels::assemble_oracle_system(problem.impact_mid, problem.risk_node, problem.h, problem.x0);
    const auto interior = numerics::solve_tridiagonal(sys.lower, sys.diag, sys.upper, sys.rhs);
    std::vector<double> x(problem.N + 1, 0.0);
    x[0] = problem.x0;
    for (std::size_t i = 0; i < interior.size(); ++i) x[i + 1] = interior[i];
    x[problem.N] = 0.0;
    return x;
}

OracleSolution solve_discrete(const Scenario& scenario, std::size_t N, bool estimate_error) {
    const DiscreteProblem problem = discretize(scenario, N);
    std::vector<double> x = solve_nodes(problem);
    const auto [impact, risk] = kernels::discrete_cost(x, problem.impact_mid, problem.risk_node, problem.h);

    CostReport cost;
    cost.impact_term = impact;
    cost.risk_term = risk;
    cost.total = impact + risk;
    cost.method_tag = "oracle";
    if (estimate_error) {
        const DiscreteProblem fine = discretize(scenario, 2 * N);
        const auto xf = solve_nodes(fine);
        const auto [fi, fr] = kernels::discrete_cost(xf, fine.impact_mid, fine.risk_node, fine.h);
        cost.abs_error_estimate = std::abs(cost.total - (fi + fr)) * 4.0 / 3.0;
    }
    auto trajectory = Trajectory::sampled(problem.span, x, "oracle");
    return {trajectory, cost, std::move(x)};
}

ConvergenceReport convergence_order(const Scenario& scenario, std::span<const std::size_t> Ns) {
    if (Ns.size() < 3) throw std::invalid_argument("convergence_order: need at least three grid sizes");
    for (std::size_t i = 1; i < Ns.size(); ++i) {
        if (Ns[i] <= Ns[i - 1]) throw std::invalid_argument("convergence_order: grid sizes must ascend");
    }
    ConvergenceReport report;
    report.Ns.assign(Ns.begin(), Ns.end());
    for (std::size_t N : Ns) report.costs.push_back(solve_discrete(scenario, N, false).cost.total);

    const std::size_t L = Ns.size() - 1;
    const double r = static_cast<double>(Ns[L]) / static_cast<double>(Ns[L - 1]);
    report.reference = report.costs[L] + (report.costs[L] - report.costs[L - 1]) / (r * r - 1.0);

    bool exact = true;
    for (double c : report.costs) {
        const double e = std::abs(c - report.reference);
        report.errors.push_back(e);
        exact = exact && e <= 1e-13 * std::abs(report.reference);
    }
    report.exact = exact;
    if (exact) {
        report.order = std::numeric_limits<double>::quiet_NaN();
        return report;
    }

    // Fit log e = c - order * log N (log h differs from -log N by a constant).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double m = 0;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (!(report.errors[i] > 0.0)) continue;
        const double lx = std::log(static_cast<double>(Ns[i]));
        const double ly = std::log(report.errors[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        m += 1;
    }
    if (m < 2) {
        report.order = std::numeric_limits<double>::quiet_NaN();
        return report;
    }
    report.order = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    return report;
}

}  // namespace optexec
