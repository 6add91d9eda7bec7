#include <benchmark/benchmark.h>

#include "tp/modulation.hpp"
#include "tp/sh.hpp"
#include "tp/validation.hpp"

namespace {

void BM_DealiasedCube(benchmark::State& state) {
    tp::Grid1D g(32, static_cast<int>(state.range(0)));
    tp::SpectralField f = tp::random_band_ic(g, 0.1, 7);
    for (auto _ : state) benchmark::DoNotOptimize(f.cubed_dealiased());
}
BENCHMARK(BM_DealiasedCube)->Arg(256)->Arg(1024);

void BM_SHStep(benchmark::State& state) {
    tp::SHParams params;
    params.grid = tp::Grid1D(32, static_cast<int>(state.range(0)));
    params.nu[1] = tp::cdouble(0.5, 0.0);
    tp::SHState s;
    s.u = tp::random_band_ic(params.grid, 0.05, 3);
    s.v = -1.0;
    for (auto _ : state) {
        s = tp::step(s, params, 0.05);
        benchmark::DoNotOptimize(s.u.modes().data());
    }
}
BENCHMARK(BM_SHStep)->Arg(256)->Arg(1024);

void BM_HulNorm(benchmark::State& state) {
    tp::Grid1D g(32, 1024);
    tp::SpectralField f = tp::random_band_ic(g, 0.1, 11);
    for (auto _ : state) benchmark::DoNotOptimize(tp::hul_norm(f, 1));
}
BENCHMARK(BM_HulNorm);

void BM_GraphEval(benchmark::State& state) {
    tp::Grid1D slow(8, 64);
    tp::ModulationSet ms(slow, static_cast<int>(state.range(0)));
    ms.set_field(1, 1, tp::ComplexField::constant(slow, {0.5, 0.2}));
    std::map<int, tp::cdouble> nu{{1, {0.4, 0.0}}};
    tp::ChartScalars sc{2, -1.0};
    for (auto _ : state) benchmark::DoNotOptimize(tp::gl_graph_eval(ms, sc, nu));
}
BENCHMARK(BM_GraphEval)->Arg(4)->Arg(5)->Arg(6);

} // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
