// Serial reference vs OpenMP path for each parallel kernel. Arg 0 is
// serial, arg 1 parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "orbit/brouwerian_demo.hpp"
#include "orbit/located_sets.hpp"
#include "orbit/nested_limit.hpp"
#include "orbit/open_mapping.hpp"
#include "orbit/projection_pipeline.hpp"

using namespace orbit;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

Matrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = g(rng);
    return m;
}

OperatorSubspace random_subspace(std::size_t dim, std::size_t k, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i < k; ++i) basis.push_back(random_matrix(rng, dim));
    return make_subspace(basis);
}

void BM_GridOracle(benchmark::State& state) {
    const OperatorSubspace s = random_subspace(3, 3, 1);
    const Vector x{0.3, -1.1, 0.7}, y{1.0, 2.0, -0.5};
    for (auto _ : state) benchmark::DoNotOptimize(grid_oracle_distance(y, s, x, 1.0, 0.03, exec_of(state)));
}
BENCHMARK(BM_GridOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EpsilonNet(benchmark::State& state) {
    const OperatorSubspace s = random_subspace(3, 2, 2);
    const Vector x{1.0, 0.5, -0.2};
    NetOptions o;
    o.verify_samples = 2000;
    for (auto _ : state) benchmark::DoNotOptimize(epsilon_net(s, x, 1.0, 0.05, o, exec_of(state)).points.size());
}
BENCHMARK(BM_EpsilonNet)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_InnerRadius(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const MatrixImageSet body(random_matrix(rng, 3));
    const std::vector<Vector> w{Vector::unit(3, 0), Vector::unit(3, 1), Vector::unit(3, 2)};
    RadiusOptions o;
    o.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(inner_radius(body, w, 1e-7, o).r);
}
BENCHMARK(BM_InnerRadius)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BuildProjection(benchmark::State& state) {
    const OperatorSubspace s = random_subspace(3, 2, 4);
    const Vector x{0.6, 0.8, 0.3};
    ProjectionOptions o;
    o.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(build_projection(s, x, 1e-6, o).r);
}
BENCHMARK(BM_BuildProjection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DemoTable(benchmark::State& state) {
    const std::vector<double> cs = default_demo_values();
    for (auto _ : state) benchmark::DoNotOptimize(demo_table(cs, 30, 1e-6, exec_of(state)).size());
}
BENCHMARK(BM_DemoTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NestedLevels(benchmark::State& state) {
    NestedOptions o;
    o.budget = 30;
    o.stab_tol = 1e-12;
    o.exec = exec_of(state);
    const OperatorSubspace d = diag_subspace();
    for (auto _ : state) benchmark::DoNotOptimize(locate_distance(Vector{0, 1}, d, Vector{1, 0.04}, o).levels.size());
}
BENCHMARK(BM_NestedLevels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
