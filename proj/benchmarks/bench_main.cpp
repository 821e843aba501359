#include <benchmark/benchmark.h>

#include "tzitzeica/degree.hpp"
#include "tzitzeica/estimates.hpp"
#include "tzitzeica/graph.hpp"
#include "tzitzeica/solvers.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace tzitzeica;

namespace {

// Cycle on n vertices with a chord across from every third vertex of the first half, smoothly varying data.
WeightedGraph ring(std::size_t n) {
    std::vector<std::string> labels;
    std::vector<double> mu;
    std::vector<Edge> edges;
    for (std::size_t x = 0; x < n; ++x) {
        labels.push_back("v" + std::to_string(x));
        mu.push_back(1.0 + 0.3 * std::sin(static_cast<double>(x)));
    }
    if (n == 2) edges.push_back({0, 1, 1.0});
    for (std::size_t x = 0; n > 2 && x < n; ++x) edges.push_back({x, (x + 1) % n, 1.0 + 0.5 * std::cos(x * 0.7)});
    for (std::size_t x = 0; n > 5 && x < n / 2; x += 3) edges.push_back({x, (x + n / 2) % n, 0.75});
    return WeightedGraph(std::move(labels), std::move(mu), std::move(edges));
}

ProblemSpec classic(std::size_t n) {
    VertexField h1(n), h2(n);
    for (std::size_t x = 0; x < n; ++x) {
        h1[x] = 1.0 + 0.5 * std::sin(x * 1.3);
        h2[x] = -1.0 - 0.5 * std::cos(x * 0.9);
    }
    return ProblemSpec(EquationKind::Classic, h1, h2, 1.0, 1.5);
}

ProblemSpec generalized(std::size_t n) {
    VertexField h1(n), h2(n);
    for (std::size_t x = 0; x < n; ++x) {
        h1[x] = 0.6 + 0.1 * std::sin(x * 1.3);
        h2[x] = 1.8 + 0.1 * std::cos(x * 0.9);
    }
    return ProblemSpec(EquationKind::Generalized, h1, h2, 1.0, 1.0);
}

} // namespace

static void Laplacian(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const WeightedGraph g = ring(n);
    VertexField u(n);
    for (std::size_t x = 0; x < n; ++x) u[x] = std::sin(static_cast<double>(x));
    for (auto _ : state) benchmark::DoNotOptimize(laplacian(g, u));
}
BENCHMARK(Laplacian)->RangeMultiplier(2)->Range(4, 64);

static void SpectralConstants(benchmark::State& state) {
    const WeightedGraph g = ring(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(graph_constants(g));
}
BENCHMARK(SpectralConstants)->RangeMultiplier(2)->Range(4, 64);

static void NewtonClassic(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const WeightedGraph g = ring(n);
    const ProblemSpec spec = classic(n);
    for (auto _ : state) benchmark::DoNotOptimize(newton(spec, g, VertexField(n), SolverConfig{}));
}
BENCHMARK(NewtonClassic)->RangeMultiplier(2)->Range(4, 64);

static void ContinuationClassic(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const WeightedGraph g = ring(n);
    const ProblemSpec spec = classic(n);
    const std::vector<double> grid = default_t_grid();
    for (auto _ : state)
        benchmark::DoNotOptimize(continuation(spec, g, grid, default_epsilon(spec), SolverConfig{}));
}
BENCHMARK(ContinuationClassic)->RangeMultiplier(2)->Range(4, 32);

static void MinimizeBox(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const WeightedGraph g = ring(n);
    const ProblemSpec spec = generalized(n);
    const BarrierPair bp = choose_barriers(spec, g);
    for (auto _ : state) benchmark::DoNotOptimize(minimize_box(spec, g, bp, SolverConfig{}));
}
BENCHMARK(MinimizeBox)->RangeMultiplier(2)->Range(4, 32);

static void DegreeGeneralized(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const WeightedGraph g = ring(n);
    const ProblemSpec spec = generalized(n);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_degree(spec, g, SolverConfig{}, 64));
}
BENCHMARK(DegreeGeneralized)->DenseRange(2, 12, 5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
