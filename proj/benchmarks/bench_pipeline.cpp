#include <benchmark/benchmark.h>

#include <filesystem>

#include "gridcodes/solver.hpp"

using namespace gridcodes;

static void BM_build_and_trim(benchmark::State& state) {
    const int h = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const AuxGraph g = trim(build_aux_graph(CodeKind::ID, GridKind::Square, h));
        benchmark::DoNotOptimize(g.vertex_count());
    }
}
BENCHMARK(BM_build_and_trim)->Unit(benchmark::kMillisecond)->Arg(1)->Arg(2)->Arg(3);

static void BM_window_rule(benchmark::State& state) {
    const int h = static_cast<int>(state.range(0));
    const WindowRule rule(GridKind::King, h, 5);
    std::uint64_t code = 0;
    const std::uint64_t mask = (1ull << (5 * h)) - 1;
    for (auto _ : state) {
        code = (code * 2862933555777941757ull + 3037000493ull) & mask;
        benchmark::DoNotOptimize(rule.window_ok(CodeKind::ID, code));
    }
}
BENCHMARK(BM_window_rule)->Arg(2)->Arg(3)->Arg(4);

// End-to-end stability detection at height 2, store on disk included.
static void BM_detect_stability_h2(benchmark::State& state) {
    namespace fs = std::filesystem;
    const AuxGraph g = trim(build_aux_graph(CodeKind::ID, GridKind::Square, 2));
    const MinPlusMatrix pi = length_matrix(g);
    const fs::path dir = fs::temp_directory_path() / "gridcodes-bench-store";
    for (auto _ : state) {
        fs::remove_all(dir);
        PowerStore store = PowerStore::open(dir, 1);
        benchmark::DoNotOptimize(detect_stability(pi, 1000, store));
    }
    fs::remove_all(dir);
}
BENCHMARK(BM_detect_stability_h2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
