#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "optexec/closed_form.hpp"
#include "optexec/errors.hpp"
#include "optexec/model_core.hpp"
#include "optexec/oracle.hpp"
#include "optexec/riccati.hpp"
#include "support.hpp"

using namespace optexec;
using namespace optexec::testing;

namespace {

Trajectory line(double t0, double T, double x0) { return linear_schedule(t0, T, x0, "test"); }

template <class Fn>
double fd(Fn f, double s, int order) {
    const double h = 1e-4;
    if (order == 1) return (f(s + h) - f(s - h)) / (2 * h);
    return (f(s + h) - 2 * f(s) + f(s - h)) / (h * h);
}

}  // namespace

TEST_CASE("coefficient families evaluate their formulas") {
    CHECK(CF::constant(2.5).value(7.0) == 2.5);
    CHECK(CF::exponential(2.0, 0.5).value(1.0) == doctest::Approx(2.0 * std::exp(0.5)));
    CHECK(CF::cosh_power(2.0, 1.5, 0.7, 1).value(0.3) == doctest::Approx(2.0 * 1.5 * std::cosh(0.21)));
    CHECK(CF::cosh_power(2.0, 1.5, 0.7, 2).value(0.3) == doctest::Approx(2.0 * 2.25 * std::pow(std::cosh(0.21), 2)));
    CHECK(CF::quadratic_product(3.0, 0.5).value(2.0) == doctest::Approx(9.0));
    CHECK(CF::quadratic_product(3.0, 0.5, 0.5).value(2.0) == doctest::Approx(3.0 * std::sqrt(3.0)));
    CHECK(CF::constant(1.0).family() == CoefficientFamily::Constant);
    CHECK(to_string(CoefficientFamily::Tabulated) == "Tabulated");
}

TEST_CASE("parametric derivatives agree with finite differences") {
    const std::vector<CoefficientFunction> fns{CF::exponential(1.3, -0.8), CF::cosh_power(0.7, 1.2, 0.9, 1),
                                               CF::cosh_power(0.7, 1.2, 0.9, 2), CF::quadratic_product(1.1, 0.6),
                                               CF::quadratic_product(1.1, 0.6, 0.5)};
    for (const auto& f : fns) {
        for (double s : {-0.4, 0.0, 0.35, 1.2}) {
            auto v = [&f](double t) { return f.value(t); };
            CHECK(f.derivative(s) == doctest::Approx(fd(v, s, 1)).epsilon(1e-7));
            CHECK(f.second_derivative(s) == doctest::Approx(fd(v, s, 2)).epsilon(1e-5));
        }
        CHECK_FALSE(f.derivatives_approximate());
    }
    auto tab = CF::tabulated({0, 1, 2, 3}, {1, 2, 2.5, 2.7});
    CHECK(tab.derivatives_approximate());
    CHECK(tab.value(1.0) == 2.0);
}

TEST_CASE("tabulated coefficients need four increasing knots") {
    CHECK_THROWS_AS(CF::tabulated({0, 1, 2}, {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS(CF::tabulated({0, 1, 1, 2}, {1, 1, 1, 1}));
    CHECK_THROWS_AS(CF::constant(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(CF::cosh_power(1, 1, 1, 3), std::invalid_argument);
}

TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(Scenario(1.0, 1.0, 1.0, 1.0, CF::constant(1), CF::constant(1)), std::invalid_argument);
    CHECK_THROWS_AS(Scenario(0.0, 1.0, 1.0, -0.1, CF::constant(1), CF::constant(1)), std::invalid_argument);
    CHECK_THROWS_AS(Scenario(0.0, 1.0, 1.0, 1.0, CF::constant(0.0), CF::constant(1)), std::invalid_argument);
    CHECK_NOTHROW(Scenario(0.0, 1.0, 1.0, 1.0, CF::constant(1.0), CF::constant(0.0)));
    CHECK_NOTHROW(Scenario(0.0, 1.0, -3.0, 0.0, CF::constant(1.0), CF::constant(1.0)));
    // 1 - 4 s^2 vanishes at s = 0.5
    CHECK_THROWS_AS(Scenario(0.0, 1.0, 1.0, 1.0, CF::quadratic_product(1.0, -4.0), CF::constant(1)),
                    std::invalid_argument);
    try {
        Scenario(0.0, 1.0, 1.0, 1.0, CF::tabulated({0, 0.3, 0.6, 1.0}, {1, 1, -0.5, 1}), CF::constant(1));
        FAIL("negative knot accepted");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("0.59999999999999998") != std::string::npos);
    }
    CHECK_THROWS_AS(Scenario(0.0, 2.0, 1.0, 1.0, CF::tabulated({0, 0.3, 0.6, 1.0}, {1, 1, 1, 1}), CF::constant(1)),
                    std::invalid_argument);
    const auto s = constant_scenario();
    CHECK(s.with_lambda(3.0).lambda() == 3.0);
    CHECK(s.with_x0(-2.0).x0() == -2.0);
    CHECK(s.risk_weight(0.2) == 1.0);
    CHECK(to_string(Frame::Trader) == "trader");
}

TEST_CASE("evaluate_cost examples") {
    const auto lin = line(0.0, 1.0, 1.0);
    const auto c0 = evaluate_cost(constant_scenario(0.0), lin);
    CHECK(c0.total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*c0.risk_term == 0.0);

    const auto opt = solve_scenario_closed_form(constant_scenario());
    const auto c1 = evaluate_cost(constant_scenario(), opt.trajectory);
    CHECK(relative(c1.total, kCoth1) < 1e-10);
    CHECK(std::abs(c1.total - (*c1.impact_term + *c1.risk_term)) <= c1.abs_error_estimate + 1e-15);
    CHECK(*c1.impact_term >= 0.0);
    CHECK(*c1.risk_term >= 0.0);
    CHECK(c1.method_tag == "quadrature");

    const auto zero = evaluate_cost(constant_scenario(1.0, 0.0), Trajectory::zero(Span{0, 1}));
    CHECK(zero.total == 0.0);
}

TEST_CASE("evaluate_cost rejects a mismatched span") {
    CHECK_THROWS_AS(evaluate_cost(constant_scenario(), line(0.0, 2.0, 1.0)), SpanMismatch);
}

TEST_CASE("el_residual examples") {
    const auto opt = solve_scenario_closed_form(constant_scenario());
    const auto r = el_residual(constant_scenario(), opt.trajectory, 1001);
    CHECK(r.sup_norm < 1e-6);
    CHECK(r.samples.size() == 999);

    const auto lr = el_residual(constant_scenario(), line(0.0, 1.0, 1.0), 3);
    REQUIRE(lr.samples.size() == 1);
    CHECK(lr.samples[0].first == 0.5);
    CHECK(lr.samples[0].second == doctest::Approx(-0.5));

    CHECK(el_residual(constant_scenario(), Trajectory::zero(Span{0, 1}), 101).sup_norm == 0.0);
    CHECK_THROWS(el_residual(constant_scenario(), opt.trajectory, 2));
}

TEST_CASE("sampled trajectories fall back to central differences") {
    const auto o = solve_discrete(constant_scenario(), 4096, false);
    CHECK_FALSE(o.trajectory.has_second_derivative());
    CHECK(el_residual(constant_scenario(), o.trajectory, 1001).sup_norm < 1e-5);
}

TEST_CASE("every solver returns an on-shell trajectory with exact boundary values") {
    for (const auto& scenario : {constant_scenario(), cosh_scenario(), exp_scenario(), gaussian_scenario(),
                                 tabulated_scenario(), mixed_scenario(-1.5)}) {
        const double scale = std::max(1.0, std::abs(scenario.x0()));
        std::vector<Trajectory> trajectories{solve_discrete(scenario, 4096, false).trajectory,
                                             solve_scenario_riccati(scenario).trajectory};
        if (detect_family(scenario)) trajectories.push_back(solve_scenario_closed_form(scenario).trajectory);
        for (const auto& t : trajectories) {
            CAPTURE(t.method_tag());
            // Central differences straddling a tabulated knot pick up the jump in x'''.
            if (t.has_second_derivative() || scenario.eta().family() != CoefficientFamily::Tabulated) {
                CHECK(el_residual(scenario, t, 1001).sup_norm < 1e-5 * scale);
            }
            CHECK(std::abs(t.value(scenario.t0()) - scenario.x0()) <= 1e-12 * scale);
            CHECK(std::abs(t.value(scenario.T())) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("the optimum beats random smooth perturbations") {
    const auto scenario = cosh_scenario(0.5, 2.0, 1.0);
    const auto opt = solve_scenario_closed_form(scenario);
    const double best = evaluate_cost(scenario, opt.trajectory).total;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng);
        auto bump = [=](double s) {
            return 0.1 * (a1 * std::sin(std::numbers::pi * s) + a2 * std::sin(2 * std::numbers::pi * s) +
                          a3 * std::sin(3 * std::numbers::pi * s)) /
                   3.0;
        };
        auto dbump = [=](double s) {
            const double p = std::numbers::pi;
            return 0.1 * (a1 * p * std::cos(p * s) + a2 * 2 * p * std::cos(2 * p * s) + a3 * 3 * p * std::cos(3 * p * s)) / 3.0;
        };
        auto perturbed = Trajectory::closed_form(
            Span{0, 1}, [&opt, bump](double s) { return opt.trajectory.value(s) + bump(s); },
            [&opt, dbump](double s) { return opt.trajectory.derivative(s) + dbump(s); }, {}, "perturbed", "test");
        CHECK(evaluate_cost(scenario, perturbed).total >= best);
    }
}

TEST_CASE("optimal cost scales with x0 squared for every solver") {
    const auto base = mixed_scenario(1.0);
    const auto scaled = mixed_scenario(-3.0);
    CHECK(relative(solve_scenario_riccati(scaled).cost.total, 9.0 * solve_scenario_riccati(base).cost.total) < 1e-10);
    CHECK(relative(solve_discrete(scaled, 512).cost.total, 9.0 * solve_discrete(base, 512).cost.total) < 1e-10);
    const auto c1 = solve_scenario_closed_form(cosh_scenario(1.0, 1.0, 1.0)).cost.total;
    const auto c3 = solve_scenario_closed_form(cosh_scenario(1.0, 1.0, -3.0)).cost.total;
    CHECK(relative(c3, 9.0 * c1) < 1e-10);
}

TEST_CASE("optimal cost is nondecreasing in lambda") {
    for (const auto& base : {constant_scenario(), cosh_scenario(), tabulated_scenario(), mixed_scenario()}) {
        double prev = -1.0;
        for (double lambda : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const auto s = base.with_lambda(lambda);
            const double c = detect_family(s) ? solve_scenario_closed_form(s).cost.total
                                              : solve_scenario_riccati(s).cost.total;
            CHECK(c >= prev);
            prev = c;
        }
    }
}

TEST_CASE("require_same_span tolerates rounding only") {
    CHECK_NOTHROW(require_same_span(Span{0, 1}, Span{0, 1 + 1e-14}, "x"));
    CHECK_THROWS_AS(require_same_span(Span{0, 1}, Span{0, 1 + 1e-9}, "x"), SpanMismatch);
}
