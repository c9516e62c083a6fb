#include <benchmark/benchmark.h>

#include <armadillo>
#include <complex>
#include <cstdint>
#include <vector>

#include <oamlink/link.hpp>
#include <oamlink/rng.hpp>

using namespace oamlink;
using cplx = std::complex<double>;

namespace {

Bits random_bits(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Bits b(n);
    for (auto& v : b) v = rng.uniform() < 0.5 ? 0 : 1;
    return b;
}

void bm_qam16_roundtrip(benchmark::State& state) {
    Bits bits = random_bits(4096, 1);
    for (auto _ : state) {
        Symbols s = qam16_modulate(bits);
        benchmark::DoNotOptimize(qam16_demodulate(s));
    }
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(bm_qam16_roundtrip);

void bm_frame_through_channel(benchmark::State& state) {
    arma::cx_mat H{{cplx(1.0, 0.0), cplx(0.35, 0.0)}, {cplx(0.35, 0.0), cplx(1.0, 0.0)}};
    FrameSchedule sched{64, 1024};
    std::vector<Bits> msgs = {random_bits(4 * 1024, 2), random_bits(4 * 1024, 3)};
    std::uint64_t seed = 0;
    for (auto _ : state) {
        ++seed;
        auto tx = build_frame(msgs, sched, seed);
        benchmark::DoNotOptimize(apply_channel(tx, H, 20.0, seed));
    }
}
BENCHMARK(bm_frame_through_channel);

void bm_zf_estimate(benchmark::State& state) {
    arma::cx_mat H{{cplx(1.0, 0.0), cplx(0.35, 0.0)}, {cplx(0.35, 0.0), cplx(1.0, 0.0)}};
    FrameSchedule sched{64, 1024};
    std::vector<Bits> msgs = {random_bits(4 * 1024, 2), random_bits(4 * 1024, 3)};
    auto tx = build_frame(msgs, sched, 9);
    auto rx = apply_channel(tx, H, 20.0, 17);
    std::vector<Symbols> pilots = {pilot_block(sched, 9, 0), pilot_block(sched, 9, 1)};
    for (auto _ : state)
        benchmark::DoNotOptimize(zf_channel_estimate(rx, pilots, sched));
}
BENCHMARK(bm_zf_estimate);

void bm_link_point(benchmark::State& state) {
    ChannelMatrix H;
    H.entries = arma::cx_mat{{cplx(1.0, 0.0), cplx(0.35, 0.0)},
                             {cplx(0.35, 0.0), cplx(1.0, 0.0)}};
    H.provenance = ChannelProvenance::Measured;
    H.frequency = 1.0e10;
    FrameSchedule sched{64, 1024};
    for (auto _ : state) {
        auto res = run_link_sim(H, sched, EqualizerMode::ZeroForcing, CsiMode::Estimated,
                                {14.0}, 5, 12345);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(bm_link_point)->Unit(benchmark::kMillisecond);

}  // namespace
