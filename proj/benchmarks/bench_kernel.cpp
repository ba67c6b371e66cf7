#include <benchmark/benchmark.h>

#include <cmath>

#include "finrot/oscillator.hpp"
#include "finrot/parallel.hpp"
#include "finrot/rotation_kernel.hpp"

using namespace finrot;

namespace {

void BM_WignerDMatrix(benchmark::State& state) {
    const int two_j = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto d = wigner_d_matrix(two_j, 0.7);
        benchmark::DoNotOptimize(d.data());
    }
    state.SetComplexityN(two_j);
}
BENCHMARK(BM_WignerDMatrix)->Arg(16)->Arg(64)->Arg(102)->Complexity();

void BM_WavefunctionTable(benchmark::State& state) {
    const auto rep = OscillatorRep::from_size(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        WavefunctionTable table(rep);
        benchmark::DoNotOptimize(table.values().data());
    }
}
BENCHMARK(BM_WavefunctionTable)->Arg(13)->Arg(52);

void BM_KernelBuildCartesian(benchmark::State& state) {
    const auto rep = OscillatorRep::from_size(static_cast<int>(state.range(0)));
    const unsigned threads = static_cast<unsigned>(state.range(1));
    const WavefunctionTable table(rep);
    for (auto _ : state) {
        auto kernel = build_kernel_cartesian(rep, M_PI / 8, table, threads);
        benchmark::DoNotOptimize(kernel.matrix.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelBuildCartesian)
    ->Args({13, 1})
    ->Args({26, 1})
    ->Args({52, 1})
    ->Args({52, 0})  // 0 = hardware concurrency
    ->Unit(benchmark::kMillisecond)
    ->Complexity();

void BM_KernelApply(benchmark::State& state) {
    const auto rep = OscillatorRep::from_size(static_cast<int>(state.range(0)));
    const WavefunctionTable table(rep);
    const auto kernel = build_kernel_cartesian(rep, M_PI / 8, table);
    MonoImage image(rep, PixelDomain::data);
    for (int i = 0; i < rep.size(); ++i) image.at(i, i) = 1.0;
    for (auto _ : state) {
        auto out = apply_kernel(kernel, image);
        benchmark::DoNotOptimize(out.pixels().data());
    }
}
BENCHMARK(BM_KernelApply)->Arg(26)->Arg(52)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
