#pragma once

#include <armadillo>
#include <complex>
#include <cstdint>
#include <vector>

#include "oamlink/channel.hpp"

namespace oamlink {

using Bits = std::vector<std::uint8_t>;
using Symbols = std::vector<std::complex<double>>;

// Gray-mapped 16-QAM at unit average symbol energy; 4 bits per symbol,
// first two select the I level, last two the Q level.
Symbols qam16_modulate(const Bits& bits);

// Hard minimum-distance decisions back through the inverse Gray map.
Bits qam16_demodulate(const Symbols& symbols);

struct FrameSchedule {
    std::size_t pilot_len = 64;    // symbols per pilot block
    std::size_t payload_len = 1024;  // symbols per message block
};

// Time-division frame: stream i transmits its pilot block alone in slot i
// (all other streams silent), then every stream transmits its message
// simultaneously. Returns one symbol sequence per stream, all of length
// streams*pilot_len + payload_len.
std::vector<Symbols> build_frame(const std::vector<Bits>& messages,
                                 const FrameSchedule& sched, std::uint64_t pilot_seed);

// Deterministic pilot block for one stream (what build_frame embeds).
Symbols pilot_block(const FrameSchedule& sched, std::uint64_t pilot_seed,
                    std::size_t stream);

// y_n[t] = sum_m h_nm x_m[t] + w_n[t]. Per-receiver noise variance is set
// to (sum_m |h_nm|^2) / snr: the message-slot signal power over the target
// ratio, held constant across the whole frame.
std::vector<Symbols> apply_channel(const std::vector<Symbols>& tx,
                                   const arma::cx_mat& H, double snr_db,
                                   std::uint64_t noise_seed);

// Least-squares estimate from the time-orthogonal pilot region at the head
// of the received frame: h_nm = <y_n over slot m, p_m> / |p_m|^2.
arma::cx_mat zf_channel_estimate(const std::vector<Symbols>& received,
                                 const std::vector<Symbols>& pilots,
                                 const FrameSchedule& sched);

enum class EqualizerMode { Raw, ZeroForcing };
enum class CsiMode { Estimated, Perfect };

// Raw: stream n is y_n / h_nn (per-receiver reference only, interference
// untouched). ZeroForcing: x = H^-1 y, refusing estimates with 2-norm
// condition number beyond 1e12.
std::vector<Symbols> equalize(const std::vector<Symbols>& received_message,
                              const arma::cx_mat& h_est, EqualizerMode mode);

double ber(const Bits& sent, const Bits& received);

struct LinkResult {
    double snr_db = 0.0;
    std::vector<double> ber_per_stream;
    double rho_measured = 0.0;
    arma::cx_mat h_est;       // estimate from the first trial
    std::uint64_t trials = 0;
};

// Monte Carlo sweep over snr_grid_db: `trials` independently seeded frames
// per point, aggregated per-stream BER. Bit-identical for a fixed base_seed.
std::vector<LinkResult> run_link_sim(const ChannelMatrix& H, const FrameSchedule& sched,
                                     EqualizerMode eq, CsiMode csi,
                                     const std::vector<double>& snr_grid_db,
                                     std::uint64_t trials, std::uint64_t base_seed);

}  // namespace oamlink
