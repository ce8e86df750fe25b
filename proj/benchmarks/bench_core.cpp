#include <benchmark/benchmark.h>

#include "mlring/bifurcation.hpp"
#include "mlring/simulator.hpp"

using namespace mlring;

namespace {

LaserParams params() {
    LaserParams p;
    p.psi = -1.558963706;
    return p;
}

const RelativeEquilibrium& wave() {
    static const RelativeEquilibrium re = [] {
        const LaserParams p = params();
        return releq_at(p, branch_from_center(p, 0, 0.046), 0.045);
    }();
    return re;
}

}  // namespace

static void BM_NetworkRhs(benchmark::State& state) {
    const LaserParams p = params();
    const NetworkState x = reconstruct(p, wave());
    for (auto _ : state) benchmark::DoNotOptimize(network_rhs(p, 0.045, x, x));
}
BENCHMARK(BM_NetworkRhs);

static void BM_CountEquilibriumRoots(benchmark::State& state) {
    const LaserParams p = params();
    const CharMatrix cm = quasi_poly_equilibrium(p, 0.0362, 1);
    for (auto _ : state) benchmark::DoNotOptimize(count_rhp_roots(cm).count);
}
BENCHMARK(BM_CountEquilibriumRoots);

static void BM_BlockCounts(benchmark::State& state) {
    const LaserParams p = params();
    for (auto _ : state) benchmark::DoNotOptimize(block_counts(p, wave(), Ambient::d8()));
}
BENCHMARK(BM_BlockCounts)->Unit(benchmark::kMillisecond);

static void BM_Integrate(benchmark::State& state) {
    const LaserParams p = params();
    const auto h = rotating_wave_history(p, wave());
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(p, 0.045, h, 10.0 * p.T, p.T / state.range(0)).states.size());
    }
}
BENCHMARK(BM_Integrate)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_FindCenters(benchmark::State& state) {
    const LaserParams p = params();
    for (auto _ : state) benchmark::DoNotOptimize(find_all_centers(p, 0.035, 0.0363).size());
}
BENCHMARK(BM_FindCenters)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
