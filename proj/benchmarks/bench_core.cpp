#include "optomech/experiments.hpp"
#include "optomech/response.hpp"
#include "optomech/steady_state.hpp"

#include <benchmark/benchmark.h>

using namespace optomech;

namespace {

DriveConfig red_red(const SystemParams& p, double p_left) {
    return {p_left, 1e-7, 1e-9, p.omega_m, p.omega_m};
}

void bm_solve_steady_state(benchmark::State& state) {
    const SystemParams p = nominal_params();
    const DriveConfig d = red_red(p, 1e-6);
    for (auto _ : state) benchmark::DoNotOptimize(solve_steady_state(p, d));
}
BENCHMARK(bm_solve_steady_state);

void bm_scan_branches(benchmark::State& state) {
    const SystemParams p = nominal_params();
    const DriveConfig d = red_red(p, 1e-6);
    const int resolution = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(scan_branches(p, d, resolution));
}
BENCHMARK(bm_scan_branches)->Arg(64)->Arg(256)->Arg(1024);

void bm_transmission(benchmark::State& state) {
    const SystemParams p = nominal_params();
    const SteadyState s = solve_steady_state(p, red_red(p, 1e-6));
    double delta = p.omega_m;
    for (auto _ : state) {
        benchmark::DoNotOptimize(transmission(p, s, delta));
        delta += 1.0;
    }
}
BENCHMARK(bm_transmission);

void bm_group_delay(benchmark::State& state) {
    const SystemParams p = nominal_params();
    const SteadyState s = solve_steady_state(p, red_red(p, 1e-6));
    for (auto _ : state) benchmark::DoNotOptimize(group_delay(p, s, p.omega_m, Channel::transmission));
}
BENCHMARK(bm_group_delay);

void bm_spectrum_sweep(benchmark::State& state) {
    const SystemParams p = nominal_params();
    const DriveConfig d = red_red(p, 1e-6);
    const ProbeGrid grid = default_probe_grid(p, d, solve_steady_state(p, d));
    for (auto _ : state) benchmark::DoNotOptimize(spectrum_sweep(p, d, grid));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(bm_spectrum_sweep)->Unit(benchmark::kMillisecond);

void bm_power_sweep(benchmark::State& state) {
    const SystemParams p = nominal_params();
    const auto powers = default_power_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(power_sweep_delay(p, red_red(p, 0.0), powers, Channel::transmission));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(powers.size()));
}
BENCHMARK(bm_power_sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
