// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "optexec/cli/commands.hpp"
#include "optexec/closed_form.hpp"
#include "optexec/invariants.hpp"
#include "optexec/model_core.hpp"
#include "optexec/normal_form.hpp"
#include "optexec/oracle.hpp"
#include "optexec/reparam.hpp"
#include "optexec/riccati.hpp"
#include "support.hpp"

using namespace optexec;
using namespace optexec::testing;
namespace fs = std::filesystem;

namespace {

/// Collects failed conditions with a short description of each.
class Ledger {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ += ok ? 0 : 1;
    }
    void note(const std::string& text) { notes_.push_back(text); }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream out;
        out << checks_ - failed_ << "/" << checks_ << " checks";
        for (const auto& n : notes_) out << "; " << n;
        for (const auto& f : failures_) out << "\n        failed: " << f;
        return out.str();
    }

private:
    int checks_ = 0;
    int failed_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string within(const std::string& what, double value, double tol) {
    return what + " = " + num(value) + " (tol " + num(tol) + ")";
}

void rel_check(Ledger& l, const std::string& what, double a, double b, double tol) {
    const double r = relative(a, b);
    l.expect(r < tol, within(what, r, tol));
}

Trajectory push_forward(const Clock& clock, const Trajectory& x) {
    return Trajectory::closed_form(
        clock.tau_span(), [clock, x](double tau) { return x.value(clock.s_of_tau(tau)); },
        [clock, x](double tau) {
            const double s = clock.s_of_tau(tau);
            return x.derivative(s) / clock.rate(s);
        },
        {}, "pushed", "acceptance");
}

void constant_reproduction(Ledger& l) {
    const auto scenario = constant_scenario();
    const auto sol = solve_scenario_closed_form(scenario);
    rel_check(l, "closed form vs coth(1)", sol.cost.total, kCoth1, 1e-14);
    rel_check(l, "quadrature", evaluate_cost(scenario, sol.trajectory).total, sol.cost.total, 1e-8);
    rel_check(l, "boundary cost", boundary_cost(sol.trajectory, scenario, CostFrame::PhysicalX).total, sol.cost.total, 1e-7);
    rel_check(l, "oracle N=4096", solve_discrete(scenario, 4096).cost.total, sol.cost.total, 1e-5);
}

void hyperbolic_families(Ledger& l) {
    double worst_res = 0.0, worst_quad = 0.0, worst_oracle = 0.0;
    for (double shape : {-1.0, 0.5, 2.0}) {
        for (double lambda : {0.5, 1.0, 4.0}) {
            for (const auto& scenario : {cosh_scenario(shape, lambda), exp_scenario(shape, lambda)}) {
                const auto sol = solve_scenario_closed_form(scenario);
                const auto& x = sol.trajectory;
                worst_res = std::max(worst_res, el_residual(scenario, x, 1001).sup_norm);
                l.expect(x.value(scenario.t0()) == scenario.x0() && x.value(scenario.T()) == 0.0, "exact boundary values");
                worst_quad = std::max(worst_quad, relative(sol.cost.total, evaluate_cost(scenario, x).total));
                worst_oracle = std::max(worst_oracle, relative(sol.cost.total, solve_discrete(scenario, 4096, false).cost.total));
            }
        }
    }
    l.expect(worst_res < 1e-6, within("max residual", worst_res, 1e-6));
    l.expect(worst_quad < 1e-8, within("max quadrature rel", worst_quad, 1e-8));
    l.expect(worst_oracle < 1e-5, within("max oracle rel", worst_oracle, 1e-5));
    l.note("residual " + num(worst_res) + ", quad " + num(worst_quad) + ", oracle " + num(worst_oracle));
}

void exp_product(Ledger& l) {
    double worst = 0.0;
    bool printed_disagrees = true;
    for (double alpha : {-1.0, 0.0, 1.0, 3.0}) {
        const ExpProductParams p{alpha, 1.0, 1.0, 1.0};
        const SolvableFamily family(p);
        const auto scenario = family_scenario(family, 0.0, 1.0, 1.0, 1.0);
        const auto sol = solve_closed_form(family, 0.0, 1.0, 1.0, 1.0);
        const double quad = evaluate_cost(scenario, sol.trajectory).total;
        worst = std::max(worst, relative(sol.cost.total, quad));
        const double mu = 0.5 * std::sqrt(alpha * alpha + 4.0);
        const double printed = 0.5 * (alpha + mu / std::tanh(mu));
        printed_disagrees = printed_disagrees && relative(printed, quad) > 1e-3;
    }
    l.expect(worst < 1e-8, within("max quadrature rel", worst, 1e-8));
    const double p = 1.0;
    const auto e = solve_closed_form(SolvableFamily(ExpProductParams{0.0, 1.0, 1.0, 1.0}), 0.0, 1.0, 1.0, p);
    const auto c = solve_closed_form(SolvableFamily(ConstProductParams{p}), 0.0, 1.0, 1.0, 1.0);
    rel_check(l, "alpha = 0 vs constant product", e.cost.total, c.cost.total, 1e-10);
    l.note(std::string("printed cost form ") + (printed_disagrees ? "disagrees with quadrature at every alpha" : "agrees somewhere"));
}

void gaussian(Ledger& l) {
    const auto scenario = gaussian_scenario();
    const auto sol = solve_scenario_closed_form(scenario);
    const auto oracle = solve_discrete(scenario, 4096);
    rel_check(l, "x(0.5) vs oracle", sol.trajectory.value(0.5), oracle.trajectory.value(0.5), 1e-5);
    rel_check(l, "cost vs oracle", sol.cost.total, oracle.cost.total, 1e-5);
    rel_check(l, "x(0.5) vs frozen", sol.trajectory.value(0.5), kGaussXHalf, 1e-10);
    rel_check(l, "cost vs frozen", sol.cost.total, kGaussCost, 1e-10);
}

void riccati_equivalence(Ledger& l) {
    const auto flat = reconstruct(solve_riccati([](double) { return 1.0; }, Span{0.0, 1.0}), 1.0, 0.0, 1.0);
    const auto exact = solve_scenario_closed_form(constant_scenario());
    const double d1 = sup_distance(flat.trajectory, exact.trajectory);
    l.expect(d1 < 1e-6, within("constant sup-norm", d1, 1e-6));
    const auto scenario = cosh_scenario();
    const auto path = solve_scenario_riccati(scenario, RiccatiFrame::TauFrame);
    const double d2 = sup_distance(path.trajectory, solve_scenario_closed_form(scenario).trajectory);
    l.expect(d2 < 1e-5, within("cosh sup-norm", d2, 1e-5));
    l.note("sup-norms " + num(d1) + ", " + num(d2));
}

void reparametrization(Ledger& l) {
    double worst_cost = 0.0, worst_trip = 0.0;
    for (const auto& scenario : {cosh_scenario(0.7, 2.0), mixed_scenario()}) {
        const auto x = detect_family(scenario) ? solve_scenario_closed_form(scenario).trajectory
                                               : solve_scenario_riccati(scenario).trajectory;
        const double physical = evaluate_cost(scenario, x).total;
        for (ClockKind kind : {ClockKind::AlmgrenChriss, ClockKind::FirstParameter, ClockKind::SecondParameter}) {
            const auto clock = build_clock(kind, scenario);
            const auto eff = transform_scenario(clock, scenario);
            worst_cost = std::max(worst_cost, relative(evaluate_cost(eff.lagrangian(), push_forward(clock, x)).total, physical));
            const double length = scenario.T() - scenario.t0();
            for (int i = 0; i <= 1000; ++i) {
                const double s = scenario.span().uniform_point(i, 1001);
                worst_trip = std::max(worst_trip, std::abs(clock.s_of_tau(clock.tau(s)) - s) / length);
            }
        }
    }
    l.expect(worst_cost < 1e-6, within("max cost rel", worst_cost, 1e-6));
    l.expect(worst_trip < 1e-10, within("max round trip / length", worst_trip, 1e-10));
    l.note("cost " + num(worst_cost) + ", round trip " + num(worst_trip));
}

void ermakov(Ledger& l) {
    const auto cosh_W = coefficient_W(cosh_scenario(), RiccatiFrame::TauFrame);
    struct Case {
        std::string name;
        std::function<double(double)> W;
        Span span;
    };
    const std::vector<Case> cases{{"constant", [](double) { return 1.0; }, Span{0.0, 1.0}},
                                  {"cosh-derived", cosh_W.W, cosh_W.span},
                                  {"quadratic", [](double t) { return 1.0 + t * t; }, Span{0.0, 1.0}}};
    double worst = 0.0;
    for (const auto& c : cases) {
        const auto x = reconstruct(solve_riccati(c.W, c.span), 1.0, c.span.start, c.span.end);
        const auto rep = ermakov_invariant(solve_pinney(c.W, c.span), x.trajectory, 1001);
        l.expect(rep.drift < 1e-6, within(c.name + " drift", rep.drift, 1e-6));
        worst = std::max(worst, rep.drift);
        if (c.name == "constant") rel_check(l, "1/(2 sinh^2 1)", rep.median, 0.5 / std::pow(std::sinh(1.0), 2), 1e-8);
    }
    l.note("max drift " + num(worst));
}

void convergence(Ledger& l) {
    const std::size_t Ns[] = {64, 128, 256, 512};
    std::string orders;
    for (const auto& scenario : {constant_scenario(), cosh_scenario()}) {
        const auto report = convergence_order(scenario, Ns);
        l.expect(!report.exact && std::abs(report.order - 2.0) <= 0.2, within("order - 2", report.order - 2.0, 0.2));
        orders += (orders.empty() ? "" : ", ") + num(report.order);
    }
    l.note("orders " + orders);
}

void degenerate(Ledger& l) {
    const Scenario idle(0.0, 2.0, 3.0, 0.0, CF::constant(1.5), CF::cosh_power(1.0, 1.0, 0.4, 1));
    auto line = [](double s) { return 3.0 * (2.0 - s) / 2.0; };
    const std::vector<std::pair<std::string, Trajectory>> paths{
        {"closed form", solve_scenario_closed_form(idle).trajectory},
        {"riccati tau", solve_scenario_riccati(idle, RiccatiFrame::TauFrame).trajectory},
        {"riccati u", solve_scenario_riccati(idle, RiccatiFrame::UFrameS).trajectory},
        {"oracle", solve_discrete(idle, 4096, false).trajectory}};
    for (const auto& [name, x] : paths) {
        const double d = sup_distance_fn(x, line);
        l.expect(d < 1e-8, within(name + " linear sup-norm", d, 1e-8));
    }
    for (const auto& scenario : {constant_scenario(1.0, 0.0), cosh_scenario(1.0, 1.0, 0.0), mixed_scenario(0.0)}) {
        std::vector<std::pair<std::string, std::pair<Trajectory, double>>> zero;
        if (detect_family(scenario)) {
            const auto c = solve_scenario_closed_form(scenario);
            zero.push_back({"closed form", {c.trajectory, c.cost.total}});
        }
        for (auto frame : {RiccatiFrame::TauFrame, RiccatiFrame::UFrameS}) {
            const auto r = solve_scenario_riccati(scenario, frame);
            zero.push_back({"riccati", {r.trajectory, r.cost.total}});
        }
        const auto o = solve_discrete(scenario, 1024);
        zero.push_back({"oracle", {o.trajectory, o.cost.total}});
        for (const auto& [name, sol] : zero) {
            l.expect(sup_distance_fn(sol.first, [](double) { return 0.0; }) == 0.0, name + " zero schedule");
            l.expect(sol.second == 0.0, name + " zero cost");
        }
    }
}

int run_cli(std::vector<std::string> args, std::string& out) {
    args.insert(args.begin(), "optexec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    return code;
}

void cli_contract(Ledger& l) {
    int files = 0;
    for (const auto& entry : fs::directory_iterator(OPTEXEC_SCENARIO_DIR)) {
        if (entry.path().extension() != ".json") continue;
        ++files;
        const std::string path = entry.path().string();
        const std::string name = entry.path().filename().string();
        for (const auto& args : {std::vector<std::string>{"solve", "--scenario", path},
                                 std::vector<std::string>{"sweep", "--scenario", path, "--from", "0", "--to", "2", "--steps", "5"},
                                 std::vector<std::string>{"verify", "--scenario", path}}) {
            std::string a, b;
            const int ca = run_cli(args, a);
            const int cb = run_cli(args, b);
            l.expect(ca == 0 && cb == 0, name + " " + args[0] + " exit " + std::to_string(ca));
            l.expect(a == b && !a.empty(), name + " " + args[0] + " byte-identical");
        }
    }
    l.expect(files >= 1, "shipped scenarios present");
    l.note(std::to_string(files) + " shipped scenarios");
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Ledger&)> body;
    double time_limit;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "constant-coefficient reproduction", constant_reproduction, 1.0},
        {2, "cosh and exponential families", hyperbolic_families, 30.0},
        {3, "exponential-product cost", exp_product, 0.0},
        {4, "gaussian family", gaussian, 0.0},
        {5, "riccati path equivalence", riccati_equivalence, 0.0},
        {6, "reparametrization invariance", reparametrization, 0.0},
        {7, "ermakov invariant", ermakov, 0.0},
        {8, "oracle convergence order", convergence, 0.0},
        {9, "degenerate limits", degenerate, 0.0},
        {10, "cli contract", cli_contract, 0.0},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Ledger ledger;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(ledger);
        } catch (const std::exception& e) {
            ledger.expect(false, std::string("exception: ") + e.what());
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0) ledger.expect(elapsed < c.time_limit, within("runtime s", elapsed, c.time_limit));
        failed += ledger.ok() ? 0 : 1;
        std::printf("%s %2d  %-36s %8.3f s  %s\n", ledger.ok() ? "PASS" : "FAIL", c.id, c.name, elapsed,
                    ledger.summary().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
