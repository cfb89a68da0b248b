// Serial reference vs OpenMP kernels. Arg(1) is the parallel variant.
// Thread count follows OMP_NUM_THREADS / THREADS.

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "morsespec/asian.hpp"
#include "morsespec/montecarlo.hpp"
#include "morsespec/morse.hpp"
#include "morsespec/parallel.hpp"
#include "morsespec/quadrature.hpp"

using namespace morsespec;

namespace {

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) ? "openmp x" + std::to_string(parallel::max_threads()) : "serial");
}

void BM_McPaths(benchmark::State& state) {
    const asian::MarketParams m{2.0, 2.0, 0.05, 0.5, 1.0};
    mc::McConfig c;
    c.n_paths = 100000;
    c.n_steps = 256;
    c.parallel = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(mc::price_asian(m, mc::Payoff::put, c).mean);
    state.SetItemsProcessed(state.iterations() * c.n_paths);
    label(state);
}

void BM_QuadraturePanels(benchmark::State& state) {
    const asian::MarketParams m{2.0, 2.0, 0.05, 0.5, 1.0};
    auto spec = asian::spectral_spec();
    spec.parallel = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(asian::put_price(m, spec).price);
    label(state);
}

void BM_HeatKernelPanels(benchmark::State& state) {
    auto spec = asian::spectral_spec();
    spec.parallel = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(asian::heat_kernel_at_zero(0.4, 0.25, -0.6, spec));
    label(state);
}

void BM_ReconstructNodes(benchmark::State& state) {
    const morse::MorsePotential pot{2.3, 0.0};
    morse::TabulatedFunction f;
    for (int i = 0; i <= 2000; ++i) {
        const double x = -8.0 + 0.01 * i;
        f.x.push_back(x);
        f.y.push_back(std::exp(-(x - 1.0) * (x - 1.0)));
    }
    morse::ReconstructSpec spec;
    spec.coefficient_cutoff = 1e-3;
    spec.parallel = state.range(0) != 0;
    const std::vector<double> xo = {-2.0, -0.5, 0.0, 1.0, 2.5, 4.0};
    for (auto _ : state) benchmark::DoNotOptimize(morse::reconstruct(f, pot, spec, xo).f.y.data());
    label(state);
}

}  // namespace

BENCHMARK(BM_McPaths)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_QuadraturePanels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HeatKernelPanels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ReconstructNodes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(2);

int main(int argc, char** argv) {
    parallel::apply_thread_env();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
