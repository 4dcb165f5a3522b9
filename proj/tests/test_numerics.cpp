#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "optexec/errors.hpp"
#include "optexec/kernels.hpp"
#include "optexec/numerics/monotone_cubic.hpp"
#include "optexec/numerics/ode.hpp"
#include "optexec/numerics/quadrature.hpp"
#include "optexec/numerics/tridiagonal.hpp"

using namespace optexec;
using namespace optexec::numerics;

TEST_CASE("quadrature integrates smooth functions to tolerance") {
    auto r = integrate([](double x) { return std::exp(-x * x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(0.746824132812427025).epsilon(1e-14));

    auto s = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("quadrature splits at breakpoints") {
    auto kink = [](double x) { return std::abs(x - 0.3); };
    const std::vector<double> breaks{0.0, 0.3, 1.0};
    auto r = integrate(kink, breaks);
    CHECK(r.value == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-14));
    CHECK(r.evaluations == 30);
}

TEST_CASE("quadrature stops at the rounding floor") {
    QuadratureOptions tight{1e-16, 1e-300, 20};
    auto r = integrate_adaptive([](double) { return 1.0; }, 0.0, 1.0, tight);
    CHECK(r.converged);
    CHECK(r.evaluations == 15);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quadrature reports non-convergence with the best estimate") {
    QuadratureOptions shallow{1e-12, 1e-300, 2};
    auto singular = [](double x) { return 1.0 / std::sqrt(x); };
    CHECK_FALSE(integrate_adaptive(singular, 0.0, 1.0, shallow).converged);
    try {
        integrate(singular, 0.0, 1.0, shallow);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.best_estimate() > 1.5);
        CHECK(e.best_estimate() < 2.0);
        CHECK(e.error_estimate() > 0.0);
    }
}

TEST_CASE("monotone cubic reproduces cubic-free data and stays in range") {
    std::vector<double> knots{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    std::vector<double> lin;
    for (double k : knots) lin.push_back(3.0 - 2.0 * k);
    MonotoneCubic line(knots, lin);
    for (double x = 0.0; x <= 2.5; x += 0.01) {
        CHECK(line.value(x) == doctest::Approx(3.0 - 2.0 * x).epsilon(1e-13));
        CHECK(line.derivative(x) == doctest::Approx(-2.0).epsilon(1e-12));
    }

    std::vector<double> step{0.0, 0.0, 0.0, 1.0, 1.0, 1.0};
    MonotoneCubic mono(knots, step);
    double prev = -1.0;
    for (double x = 0.0; x <= 2.5; x += 0.001) {
        const double v = mono.value(x);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("monotone cubic is fourth-order on smooth data") {
    auto err_for = [](std::size_t n) {
        std::vector<double> k(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            k[i] = static_cast<double>(i) / static_cast<double>(n - 1);
            v[i] = std::exp(k[i]);
        }
        MonotoneCubic c(k, v);
        double err = 0.0;
        for (int i = 0; i <= 1000; ++i) err = std::max(err, std::abs(c.value(i / 1000.0) - std::exp(i / 1000.0)));
        return err;
    };
    const double e1 = err_for(33), e2 = err_for(65);
    CHECK(std::log2(e1 / e2) > 3.5);
}

TEST_CASE("monotone cubic rejects bad knots") {
    CHECK_THROWS(MonotoneCubic({0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}));
    CHECK_THROWS(MonotoneCubic({0.0}, {1.0}));
}

TEST_CASE("lagrange slopes are exact for quartics") {
    std::vector<double> k{0.0, 0.3, 0.7, 1.0, 1.6, 2.0, 2.2};
    std::vector<double> v;
    for (double x : k) v.push_back(x * x * x * x - x);
    const auto d = lagrange_slopes(k, v);
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(d[i] == doctest::Approx(4 * std::pow(k[i], 3) - 1).epsilon(1e-10));
}

TEST_CASE("tridiagonal solve matches the dense answer") {
    std::vector<double> lower{-1, -1, -1}, diag{4, 4, 4, 4}, upper{-1, -1, -1}, rhs{1, 2, 3, 4};
    const auto x = solve_tridiagonal(lower, diag, upper, rhs);
    for (std::size_t i = 0; i < 4; ++i) {
        double row = diag[i] * x[i];
        if (i > 0) row += lower[i - 1] * x[i - 1];
        if (i < 3) row += upper[i] * x[i + 1];
        CHECK(row == doctest::Approx(rhs[i]).epsilon(1e-14));
    }
    std::vector<double> zero_diag{0.0, 1.0};
    std::vector<double> off{0.0};
    std::vector<double> b2{1.0, 1.0};
    CHECK_THROWS(solve_tridiagonal(off, zero_diag, off, b2));
}

TEST_CASE("dopri integrates forward and backward") {
    OdeOptions opt;
    auto rhs = [](double, const std::array<double, 1>& y) { return std::array<double, 1>{-y[0]}; };
    auto never = [](double, const std::array<double, 1>&) { return false; };
    auto fwd = integrate_dopri<1>(rhs, 0.0, 2.0, {1.0}, opt, never);
    CHECK(fwd.status == OdeStatus::Completed);
    CHECK(fwd.time.back() == 2.0);
    CHECK(fwd.state.back()[0] == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
    auto back = integrate_dopri<1>(rhs, 2.0, 0.0, {std::exp(-2.0)}, opt, never);
    CHECK(back.time.back() == 0.0);
    CHECK(back.state.back()[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(back.time[1] < back.time[0]);
}

TEST_CASE("dopri stop predicate ends the run") {
    OdeOptions opt;
    opt.max_step = 0.1;
    auto rhs = [](double, const std::array<double, 1>&) { return std::array<double, 1>{1.0}; };
    auto stop = [](double, const std::array<double, 1>& y) { return y[0] > 0.5; };
    auto run = integrate_dopri<1>(rhs, 0.0, 1.0, {0.0}, opt, stop);
    CHECK(run.status == OdeStatus::Stopped);
    CHECK(run.time.back() < 1.0);
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    const std::size_t N = 5000;
    std::vector<double> mid(N), node(N + 1), x(N + 1);
    for (auto& v : mid) v = u(rng);
    for (auto& v : node) v = u(rng);
    for (auto& v : x) v = u(rng) - 1.0;
    const double h = 1.0 / static_cast<double>(N);

    const auto a = kernels::assemble_oracle_system(mid, node, h, 1.3);
    const auto b = kernels::serial::assemble_oracle_system(mid, node, h, 1.3);
    CHECK(a.diag == b.diag);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.rhs == b.rhs);

    const auto ca = kernels::discrete_cost(x, mid, node, h);
    const auto cb = kernels::serial::discrete_cost(x, mid, node, h);
    CHECK(ca.first == cb.first);
    CHECK(ca.second == cb.second);

    CHECK(kernels::max_abs(x) == kernels::serial::max_abs(x));

    const auto grid = kernels::uniform_grid(0.0, 3.0, 777);
    std::vector<double> p(grid.size()), q(grid.size());
    auto fn = [](double s) { return std::sin(s) * std::exp(-s); };
    kernels::sample(fn, grid, p);
    kernels::serial::sample(fn, grid, q);
    CHECK(p == q);
}

TEST_CASE("sample rethrows a failure from a worker") {
    const auto grid = kernels::uniform_grid(0.0, 1.0, 100);
    std::vector<double> out(grid.size());
    auto bad = [](double s) -> double {
        if (s > 0.5) throw std::runtime_error("boom");
        return s;
    };
    CHECK_THROWS_AS(kernels::sample(bad, grid, out), std::runtime_error);
}

TEST_CASE("uniform grid has exact endpoints") {
    const auto g = kernels::uniform_grid(0.1, 0.7, 13);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 0.7);
    CHECK(g.size() == 13);
}
