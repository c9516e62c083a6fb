#include <benchmark/benchmark.h>

#include <string>

#include <oamlink/channel.hpp>
#include <oamlink/scenario.hpp>

using namespace oamlink;

namespace {

Scenario fig6() {
    return parse_scenario(std::string(OAMLINK_SCENARIO_DIR) + "/fig6.scenario");
}

void bm_plane_wave_channel(benchmark::State& state) {
    Scenario s = fig6();
    for (auto _ : state)
        benchmark::DoNotOptimize(scenario_channel_square(s, 2, {}));
}
BENCHMARK(bm_plane_wave_channel);

void bm_oam_channel_warm(benchmark::State& state) {
    // Shared patterns are memoized, so this measures the steady-state cost of
    // a channel rebuild (geometry, steering, gain lookups), not the peak scan.
    Scenario s = fig6();
    benchmark::DoNotOptimize(scenario_channel_square(s, 2, {25, 35}));
    for (auto _ : state)
        benchmark::DoNotOptimize(scenario_channel_square(s, 2, {25, 35}));
}
BENCHMARK(bm_oam_channel_warm);

void bm_condition_number(benchmark::State& state) {
    Scenario s = fig6();
    ChannelMatrix H = scenario_channel_square(s, 2, {25, 35});
    for (auto _ : state) benchmark::DoNotOptimize(condition_number(H));
}
BENCHMARK(bm_condition_number);

void bm_shannon_capacity(benchmark::State& state) {
    Scenario s = fig6();
    ChannelMatrix H = scenario_channel_square(s, 2, {25, 35});
    for (auto _ : state) benchmark::DoNotOptimize(shannon_capacity(H, 100.0));
}
BENCHMARK(bm_shannon_capacity);

}  // namespace
