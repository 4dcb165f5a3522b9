#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "optexec/kernels.hpp"
#include "optexec/oracle.hpp"
#include "optexec/scenario.hpp"

namespace {

using namespace optexec;

struct Inputs {
    std::vector<double> mid, node, x, points, out;
    explicit Inputs(std::size_t n) : mid(n), node(n + 1), x(n + 1), points(n + 1), out(n + 1) {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.5, 2.0);
        for (auto& v : mid) v = u(rng);
        for (auto& v : node) v = u(rng);
        for (auto& v : x) v = u(rng);
        points = kernels::uniform_grid(0.0, 1.0, n + 1);
    }
};

double costly(double s) {
    double acc = 0.0;
    for (int k = 1; k <= 16; ++k) acc += std::cosh(k * s * 0.1) / k;
    return acc;
}

void BM_SampleSerial(benchmark::State& state) {
    Inputs in(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        kernels::serial::sample(costly, in.points, in.out);
        benchmark::DoNotOptimize(in.out.data());
    }
}

void BM_SampleOpenMP(benchmark::State& state) {
    Inputs in(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        kernels::sample(costly, in.points, in.out);
        benchmark::DoNotOptimize(in.out.data());
    }
}

void BM_AssembleSerial(benchmark::State& state) {
    Inputs in(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::assemble_oracle_system(in.mid, in.node, 1e-3, 1.0));
}

void BM_AssembleOpenMP(benchmark::State& state) {
    Inputs in(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::assemble_oracle_system(in.mid, in.node, 1e-3, 1.0));
}

void BM_DiscreteCostSerial(benchmark::State& state) {
    Inputs in(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::discrete_cost(in.x, in.mid, in.node, 1e-3));
}

void BM_DiscreteCostOpenMP(benchmark::State& state) {
    Inputs in(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::discrete_cost(in.x, in.mid, in.node, 1e-3));
}

void BM_OracleSolve(benchmark::State& state) {
    const Scenario scenario(0.0, 1.0, 1.0, 1.0, CoefficientFunction::cosh_power(1.0, 1.0, 1.0, 2),
                            CoefficientFunction::cosh_power(1.0, 1.0, 1.0, 1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_discrete(scenario, static_cast<std::size_t>(state.range(0)), false));
    }
}

}  // namespace

BENCHMARK(BM_SampleSerial)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_SampleOpenMP)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_AssembleSerial)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_AssembleOpenMP)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_DiscreteCostSerial)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_DiscreteCostOpenMP)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_OracleSolve)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);

BENCHMARK_MAIN();
