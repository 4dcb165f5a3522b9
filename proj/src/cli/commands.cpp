#include "optexec/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <vector>

#include "optexec/cli/output.hpp"
#include "optexec/cli/scenario_file.hpp"
#include "optexec/closed_form.hpp"
#include "optexec/errors.hpp"
#include "optexec/invariants.hpp"
#include "optexec/kernels.hpp"
#include "optexec/oracle.hpp"
#include "optexec/riccati.hpp"

namespace optexec::cli {

namespace {

constexpr std::size_t kVerifyOracleGrid = 4096;

double rel(double a, double b) {
    const double diff = std::abs(a - b);
    if (diff == 0.0) return 0.0;
    return diff / std::max(std::abs(b), 1e-300);
}

bool write_output(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
    if (path.empty()) {
        out << text;
        return true;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text)) {
        err << "error: cannot write " << path << "\n";
        return false;
    }
    return true;
}

double sup_difference(const Trajectory& a, const Trajectory& b, std::size_t points) {
    const Span span = a.span();
    const auto grid = kernels::uniform_grid(span.start, span.end, points);
    std::vector<double> diff(points);
    kernels::sample([&](double s) { return a.value(s) - b.value(s); }, grid, diff);
    return kernels::max_abs(diff);
}

struct Check {
    std::string name;
    double metric = 0.0;
    bool pass = false;
    std::string detail;
};

}  // namespace

std::optional<Method> parse_method(std::string_view name) {
    if (name == "auto") return Method::Auto;
    if (name == "closed-form") return Method::ClosedForm;
    if (name == "riccati") return Method::Riccati;
    if (name == "oracle") return Method::Oracle;
    return std::nullopt;
}

Solved solve_with(const Scenario& scenario, Method method, std::size_t grid) {
    switch (method) {
        case Method::ClosedForm: {
            auto s = solve_scenario_closed_form(scenario);
            return {s.trajectory, s.cost};
        }
        case Method::Riccati: {
            auto s = solve_scenario_riccati(scenario, RiccatiFrame::TauFrame);
            return {s.trajectory, s.cost};
        }
        case Method::Oracle: {
            auto s = solve_discrete(scenario, grid);
            return {s.trajectory, s.cost};
        }
        case Method::Auto: break;
    }
    if (detect_family(scenario)) return solve_with(scenario, Method::ClosedForm, grid);
    try {
        return solve_with(scenario, Method::Riccati, grid);
    } catch (const Error&) {
        return solve_with(scenario, Method::Oracle, grid);
    }
}

CostReport cost_for_output(const Scenario& scenario, const Solved& solved) {
    CostReport report = solved.cost;
    try {
        const CostReport quad = evaluate_cost(scenario, solved.trajectory);
        report.impact_term = quad.impact_term;
        report.risk_term = quad.risk_term;
        const double gap = std::abs(report.total - (*quad.impact_term + *quad.risk_term));
        report.abs_error_estimate = std::max({report.abs_error_estimate, gap, quad.abs_error_estimate});
    } catch (const QuadratureError& e) {
        report.abs_error_estimate =
            std::max({report.abs_error_estimate, std::abs(report.total - e.best_estimate()), e.error_estimate()});
    }
    return report;
}

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
    if (options.grid < 2) {
        err << "error: --grid must be at least 2\n";
        return kUsage;
    }
    std::optional<Scenario> scenario;
    try {
        scenario = load_scenario(options.scenario);
    } catch (const ScenarioFileError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    std::optional<Solved> solved;
    CostReport cost;
    try {
        solved = solve_with(*scenario, options.method, options.grid);
        cost = cost_for_output(*scenario, *solved);
    } catch (const std::exception& e) {
        err << "error: solver failed: " << e.what() << "\n";
        return kSolverFailed;
    }
    if (!write_output(options.out, trajectory_csv(solved->trajectory), out, err)) return kUsage;
    if (!write_output(options.cost_out, cost_json(cost), out, err)) return kUsage;
    return kOk;
}

namespace {

std::vector<Check> run_checks(const Scenario& scenario, double tol, std::string& method) {
    const double x0 = scenario.x0();
    const double xscale = std::max(1.0, std::abs(x0));
    std::vector<Check> checks;
    auto add = [&](std::string name, double metric, std::string detail = {}) {
        checks.push_back({std::move(name), metric, metric <= tol, std::move(detail)});
    };

    Solved primary = solve_with(scenario, Method::Auto, kVerifyOracleGrid);
    method = primary.cost.method_tag;
    const Span span = scenario.span();

    add("boundary x(t0) = x0", std::abs(primary.trajectory.value(span.start) - x0) / xscale);
    add("boundary x(T) = 0", std::abs(primary.trajectory.value(span.end)) / xscale);

    const auto residual = el_residual(scenario, primary.trajectory, 1001);
    add("euler-lagrange residual", residual.sup_norm / xscale, "sup / max(1,|x0|)");

    const CostReport quad = evaluate_cost(scenario, primary.trajectory);
    add("cost vs quadrature", rel(primary.cost.total, quad.total), "relative");

    const auto oracle = solve_discrete(scenario, kVerifyOracleGrid);
    add("oracle agreement N=4096", rel(primary.cost.total, oracle.cost.total), "relative");
    add("oracle trajectory N=4096", sup_difference(primary.trajectory, oracle.trajectory, 1001) / xscale,
        "sup / max(1,|x0|)");

    // Trader-time path: Riccati on the second-parameter clock and its invariant.
    const RiccatiCoefficient coefficient = coefficient_W(scenario, RiccatiFrame::TauFrame);
    const RiccatiSolution riccati = solve_riccati(coefficient.W, coefficient.span, RiccatiCondition::terminal(),
                                                  riccati_ode_options(), coefficient.breakpoints);
    const ClosedFormSolution in_tau = reconstruct(riccati, x0, coefficient.span.start, coefficient.span.end);
    if (method.rfind("riccati", 0) != 0) {
        const Trajectory pulled = pull_back_trajectory(*coefficient.clock, in_tau.trajectory);
        add("riccati cost agreement", rel(in_tau.cost.total, primary.cost.total), "relative");
        add("riccati trajectory agreement", sup_difference(primary.trajectory, pulled, 1001) / xscale,
            "sup / max(1,|x0|)");
    }
    const PinneyWitness witness = solve_pinney(coefficient.W, coefficient.span);
    const ErmakovReport ermakov = ermakov_invariant(witness, in_tau.trajectory, 1001);
    add("ermakov invariant drift", ermakov.drift, "relative");
    return checks;
}

}  // namespace

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
    std::optional<Scenario> loaded;
    try {
        loaded = load_scenario(options.scenario);
    } catch (const ScenarioFileError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    const double tol = options.tol;
    std::string method;
    std::vector<Check> checks;
    try {
        checks = run_checks(*loaded, tol, method);
    } catch (const std::exception& e) {
        err << "error: solver failed: " << e.what() << "\n";
        return kSolverFailed;
    }

    bool all = true;
    char line[256];
    out << "scenario: " << options.scenario << "\n";
    out << "method:   " << method << "\n";
    std::snprintf(line, sizeof line, "%-30s %-12s %-10s %s\n", "check", "metric", "tol", "result");
    out << line;
    for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "%-30s %-12.3e %-10.1e %s\n", c.name.c_str(), c.metric, tol,
                      c.pass ? "PASS" : "FAIL");
        out << line;
        all = all && c.pass;
    }
    out << (all ? "all checks passed\n" : "some checks failed\n");
    return all ? kOk : kCheckFailed;
}

int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err) {
    if (options.param != "lambda") {
        err << "error: only --param lambda can be swept\n";
        return kUsage;
    }
    if (options.steps < 2) {
        err << "error: --steps must be at least 2\n";
        return kUsage;
    }
    if (!(options.from <= options.to) || !std::isfinite(options.from) || !std::isfinite(options.to) ||
        options.from < 0.0) {
        err << "error: need 0 <= --from <= --to\n";
        return kUsage;
    }
    std::optional<Scenario> loaded;
    try {
        loaded = load_scenario(options.scenario);
    } catch (const ScenarioFileError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    const Scenario& base = *loaded;
    const auto K = static_cast<std::size_t>(options.steps);
    std::vector<SweepRow> rows(K);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(K); ++k) {
        try {
            const auto i = static_cast<std::size_t>(k);
            const double lambda =
                i + 1 == K ? options.to
                           : options.from + (options.to - options.from) * static_cast<double>(i) / static_cast<double>(K - 1);
            const Scenario scenario = base.with_lambda(lambda);
            const CostReport cost = cost_for_output(scenario, solve_with(scenario, Method::Auto, 4096));
            rows[i] = {lambda, cost.total, cost.impact_term.value_or(std::nan("")), cost.risk_term.value_or(std::nan(""))};
        } catch (...) {
#pragma omp critical(optexec_sweep_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& e) {
            err << "error: solver failed: " << e.what() << "\n";
            return kSolverFailed;
        }
    }
    if (!write_output(options.out, sweep_csv(rows), out, err)) return kUsage;
    for (std::size_t i = 1; i < K; ++i) {
        if (rows[i].total < rows[i - 1].total - 1e-10 * std::abs(rows[i - 1].total)) {
            err << "error: total cost decreased between lambda = " << format_number(rows[i - 1].lambda)
                << " and lambda = " << format_number(rows[i].lambda) << "\n";
            return kCheckFailed;
        }
    }
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal execution schedules: closed forms, Riccati reduction and a variational oracle",
                 "optexec"};
    app.require_subcommand(1);

    SolveOptions solve;
    std::string method_name = "auto";
    auto* solve_cmd = app.add_subcommand("solve", "Solve a scenario and write the trajectory and cost");
    solve_cmd->add_option("--scenario", solve.scenario, "Scenario JSON file")->required();
    solve_cmd->add_option("--method", method_name, "auto | closed-form | riccati | oracle")
        ->check(CLI::IsMember({"auto", "closed-form", "riccati", "oracle"}));
    solve_cmd->add_option("--grid", solve.grid, "Oracle interval count")->capture_default_str();
    solve_cmd->add_option("--out", solve.out, "Trajectory CSV (default: stdout)");
    solve_cmd->add_option("--cost-out", solve.cost_out, "Cost JSON (default: stdout)");

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run the check battery on a scenario");
    verify_cmd->add_option("--scenario", verify.scenario, "Scenario JSON file")->required();
    verify_cmd->add_option("--tol", verify.tol, "Pass threshold for every metric")->capture_default_str();

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate cost against lambda");
    sweep_cmd->add_option("--scenario", sweep.scenario, "Scenario JSON file")->required();
    sweep_cmd->add_option("--param", sweep.param, "Swept parameter")->capture_default_str();
    sweep_cmd->add_option("--from", sweep.from, "First value")->required();
    sweep_cmd->add_option("--to", sweep.to, "Last value")->required();
    sweep_cmd->add_option("--steps", sweep.steps, "Number of values (>= 2)")->required();
    sweep_cmd->add_option("--out", sweep.out, "Sweep CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve_cmd) {
            solve.method = *parse_method(method_name);
            return cmd_solve(solve, out, err);
        }
        if (*verify_cmd) return cmd_verify(verify, out, err);
        return cmd_sweep(sweep, out, err);
    } catch (const std::exception&) {
        return kSolverFailed;
    }
}

}  // namespace optexec::cli
