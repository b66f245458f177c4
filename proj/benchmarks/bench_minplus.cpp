#include <benchmark/benchmark.h>

#include <random>

#include "gridcodes/minplus.hpp"

using namespace gridcodes;

namespace {

MinPlusMatrix random_matrix(int n, double finite_ratio, unsigned seed) {
    std::mt19937 rng(seed);
    MinPlusMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::uniform_real_distribution<>(0, 1)(rng) < finite_ratio)
                m.at(i, j) = static_cast<Entry>(rng() % 16);
    return m;
}

}  // namespace

static void BM_mul_dense(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto a = random_matrix(n, 0.9, 1);
    const auto b = random_matrix(n, 0.9, 2);
    for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * n * n);
}
BENCHMARK(BM_mul_dense)->Unit(benchmark::kMillisecond)->Arg(128)->Arg(512)->Arg(1024);

// The production workload: the sparse length matrix on the left, a dense
// power on the right.
static void BM_mul_sparse_left(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto pi = random_matrix(n, 8.0 / n, 3);
    const auto power = random_matrix(n, 0.95, 4);
    for (auto _ : state) benchmark::DoNotOptimize(mul(pi, power));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * n);
}
BENCHMARK(BM_mul_sparse_left)->Unit(benchmark::kMillisecond)->Arg(512)->Arg(1024)->Arg(2048);

static void BM_normalize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto m = random_matrix(n, 0.95, 5);
    for (auto _ : state) benchmark::DoNotOptimize(normalize_power(m, 3));
}
BENCHMARK(BM_normalize)->Unit(benchmark::kMillisecond)->Arg(512)->Arg(2048);
