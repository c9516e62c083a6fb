#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include <oamlink/beam.hpp>
#include <oamlink/wave.hpp>

using namespace oamlink;

namespace {

constexpr double kPi = std::numbers::pi;
const WaveParameters kWave = WaveParameters::from_frequency(10.0e9);
const WaveguideSpec kGuide{0.0151, 0.008};

std::vector<double> grid_deg(double step) {
    std::vector<double> g;
    for (double a = -180.0; a < 180.0 - 1e-9; a += step) g.push_back(a * kPi / 180.0);
    return g;
}

void bm_field_eval(benchmark::State& state) {
    int le = static_cast<int>(state.range(0));
    BeamSpec spec = make_ntcs_spec(le, kWave, kGuide);
    double theta = center_mode_peak_polar(spec, kWave);
    double phi = 0.0;
    for (auto _ : state) {
        phi += 1e-3;
        benchmark::DoNotOptimize(ntcs_field(spec, kWave, 10.0, theta, phi, 160));
    }
}
BENCHMARK(bm_field_eval)->Arg(7)->Arg(30)->Arg(45);

void bm_pattern_cut(benchmark::State& state) {
    BeamSpec spec = make_ntcs_spec(30, kWave, kGuide);
    double theta = center_mode_peak_polar(spec, kWave);
    auto grid = grid_deg(static_cast<double>(state.range(0)) / 100.0);
    for (auto _ : state) {
        PatternCut cut = pattern_cut(spec, kWave, theta, grid, 1000.0, 160);
        benchmark::DoNotOptimize(main_lobe_phase_slope(cut));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(bm_pattern_cut)->Arg(100)->Arg(25);  // 1 deg and 0.25 deg steps

void bm_pattern_scan(benchmark::State& state) {
    // Peak scan dominates BeamPattern construction; measure a cold build.
    int le = static_cast<int>(state.range(0));
    BeamSpec spec = make_ntcs_spec(le, kWave, kGuide);
    for (auto _ : state) {
        BeamPattern pat(spec, kWave, 160);
        benchmark::DoNotOptimize(pat.peak_magnitude());
    }
}
BENCHMARK(bm_pattern_scan)->Arg(7)->Arg(35)->Unit(benchmark::kMillisecond);

void bm_angular_sum(benchmark::State& state) {
    BeamSpec spec = make_ntcs_spec(30, kWave, kGuide);
    BeamPattern pat(spec, kWave, 160);
    double theta = pat.peak_theta();
    double phi = 0.0;
    for (auto _ : state) {
        phi += 1e-3;
        benchmark::DoNotOptimize(pat.angular_sum(theta, phi));
    }
}
BENCHMARK(bm_angular_sum);

}  // namespace

BENCHMARK_MAIN();
