#include "oamlink/link.hpp"

#include <algorithm>
#include <cmath>

#include "oamlink/rng.hpp"

namespace oamlink {

namespace {

constexpr double kQamScale = 0.31622776601683794;  // 1/sqrt(10)

// Per-axis Gray map: bit pair (hi, lo) -> level, 00 -3, 01 -1, 11 +1, 10 +3.
double axis_level(int hi, int lo) {
    static const double lut[4] = {-3.0, -1.0, 3.0, 1.0};  // index (hi<<1)|lo
    return lut[(hi << 1) | lo] * kQamScale;
}

void axis_bits(double v, std::uint8_t& hi, std::uint8_t& lo) {
    int idx = static_cast<int>(std::lround((v / kQamScale + 3.0) / 2.0));
    idx = std::clamp(idx, 0, 3);  // idx orders levels -3,-1,+1,+3
    hi = static_cast<std::uint8_t>(idx >= 2);
    lo = static_cast<std::uint8_t>(idx == 1 || idx == 2);
}

Symbols random_qam_block(std::size_t len, Rng& rng) {
    Symbols out(len);
    for (auto& s : out) {
        int a = rng.bit(), b = rng.bit(), c = rng.bit(), d = rng.bit();
        s = {axis_level(a, b), axis_level(c, d)};
    }
    return out;
}

}  // namespace

Symbols qam16_modulate(const Bits& bits) {
    if (bits.size() % 4 != 0)
        throw MisalignedBits("bit count must be a multiple of 4");
    Symbols out(bits.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint8_t* b = &bits[4 * i];
        out[i] = {axis_level(b[0], b[1]), axis_level(b[2], b[3])};
    }
    return out;
}

Bits qam16_demodulate(const Symbols& symbols) {
    Bits out(symbols.size() * 4);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        axis_bits(symbols[i].real(), out[4 * i], out[4 * i + 1]);
        axis_bits(symbols[i].imag(), out[4 * i + 2], out[4 * i + 3]);
    }
    return out;
}

Symbols pilot_block(const FrameSchedule& sched, std::uint64_t pilot_seed,
                    std::size_t stream) {
    Rng rng(derive_seed(pilot_seed, 0x50494C4FULL, stream));  // "PILO"
    return random_qam_block(sched.pilot_len, rng);
}

std::vector<Symbols> build_frame(const std::vector<Bits>& messages,
                                 const FrameSchedule& sched, std::uint64_t pilot_seed) {
    std::size_t m = messages.size();
    if (m == 0) throw DimensionMismatch("no message streams");
    if (sched.pilot_len < 1 || sched.payload_len < 1)
        throw DimensionMismatch("pilot and payload lengths must be >= 1");

    std::size_t total = m * sched.pilot_len + sched.payload_len;
    std::vector<Symbols> frame(m, Symbols(total, {0.0, 0.0}));
    for (std::size_t i = 0; i < m; ++i) {
        if (messages[i].size() > 4 * sched.payload_len)
            throw PayloadOverflow("message does not fit in the payload block");
        Symbols pil = pilot_block(sched, pilot_seed, i);
        std::copy(pil.begin(), pil.end(), frame[i].begin() + i * sched.pilot_len);
        Symbols msg = qam16_modulate(messages[i]);
        std::copy(msg.begin(), msg.end(), frame[i].begin() + m * sched.pilot_len);
    }
    return frame;
}

std::vector<Symbols> apply_channel(const std::vector<Symbols>& tx,
                                   const arma::cx_mat& H, double snr_db,
                                   std::uint64_t noise_seed) {
    std::size_t m = tx.size();
    if (m == 0 || m != H.n_cols)
        throw DimensionMismatch("tx stream count must match channel columns");
    std::size_t len = tx[0].size();
    for (const auto& s : tx)
        if (s.size() != len) throw DimensionMismatch("tx streams differ in length");

    double snr = std::pow(10.0, snr_db / 10.0);
    std::size_t n = H.n_rows;
    std::vector<Symbols> y(n, Symbols(len));
    Rng rng(noise_seed);
    std::vector<double> nvar(n);
    for (std::size_t i = 0; i < n; ++i) {
        double p = 0.0;
        for (std::size_t k = 0; k < m; ++k) p += std::norm(H(i, k));
        nvar[i] = p / snr;
    }
    for (std::size_t t = 0; t < len; ++t)
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t k = 0; k < m; ++k) acc += H(i, k) * tx[k][t];
            y[i][t] = acc + rng.complex_gaussian(nvar[i]);
        }
    return y;
}

arma::cx_mat zf_channel_estimate(const std::vector<Symbols>& received,
                                 const std::vector<Symbols>& pilots,
                                 const FrameSchedule& sched) {
    std::size_t n = received.size(), m = pilots.size();
    if (n == 0 || m == 0) throw DimensionMismatch("empty pilot estimation input");
    for (const auto& r : received)
        if (r.size() < m * sched.pilot_len)
            throw DimensionMismatch("received frame shorter than the pilot region");

    arma::cx_mat h(n, m);
    for (std::size_t k = 0; k < m; ++k) {
        if (pilots[k].size() != sched.pilot_len)
            throw DimensionMismatch("pilot block length mismatch");
        double energy = 0.0;
        for (const auto& p : pilots[k]) energy += std::norm(p);
        if (!(energy > 0.0)) throw ZeroPilotEnergy("pilot block has zero energy");
        std::size_t off = k * sched.pilot_len;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t t = 0; t < sched.pilot_len; ++t)
                acc += received[i][off + t] * std::conj(pilots[k][t]);
            h(i, k) = acc / energy;
        }
    }
    return h;
}

std::vector<Symbols> equalize(const std::vector<Symbols>& received_message,
                              const arma::cx_mat& h_est, EqualizerMode mode) {
    std::size_t n = received_message.size();
    if (n == 0 || n != h_est.n_rows || h_est.n_rows != h_est.n_cols)
        throw DimensionMismatch("equalizer needs a square estimate matching rx count");
    std::size_t len = received_message[0].size();
    for (const auto& r : received_message)
        if (r.size() != len) throw DimensionMismatch("rx streams differ in length");

    std::vector<Symbols> out(n, Symbols(len));
    if (mode == EqualizerMode::Raw) {
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> d = h_est(i, i);
            if (std::abs(d) == 0.0)
                throw SingularEstimate("zero diagonal estimate in raw mode");
            for (std::size_t t = 0; t < len; ++t)
                out[i][t] = received_message[i][t] / d;
        }
        return out;
    }

    arma::vec sv = arma::svd(h_est);
    if (!(sv(sv.n_elem - 1) > 0.0) || sv(0) / sv(sv.n_elem - 1) > 1e12)
        throw SingularEstimate("channel estimate too ill-conditioned to invert");
    arma::cx_mat inv = arma::inv(h_est);
    for (std::size_t t = 0; t < len; ++t) {
        arma::cx_vec y(n);
        for (std::size_t i = 0; i < n; ++i) y(i) = received_message[i][t];
        arma::cx_vec x = inv * y;
        for (std::size_t i = 0; i < n; ++i) out[i][t] = x(i);
    }
    return out;
}

double ber(const Bits& sent, const Bits& received) {
    if (sent.size() != received.size() || sent.empty())
        throw LengthMismatch("bit streams must have equal nonzero length");
    std::size_t errs = 0;
    for (std::size_t i = 0; i < sent.size(); ++i)
        if (sent[i] != received[i]) ++errs;
    return static_cast<double>(errs) / sent.size();
}

std::vector<LinkResult> run_link_sim(const ChannelMatrix& H, const FrameSchedule& sched,
                                     EqualizerMode eq, CsiMode csi,
                                     const std::vector<double>& snr_grid_db,
                                     std::uint64_t trials, std::uint64_t base_seed) {
    if (trials < 1) throw DimensionMismatch("at least one trial required");
    std::size_t m = H.entries.n_cols, n = H.entries.n_rows;
    if (m != n) throw DimensionMismatch("link simulation expects square channels");

    std::uint64_t pilot_seed = derive_seed(base_seed, 0x66726d65ULL, 0);  // "frme"
    std::vector<Symbols> pilots(m);
    for (std::size_t i = 0; i < m; ++i) pilots[i] = pilot_block(sched, pilot_seed, i);

    double rho = n >= 2 ? correlation_coefficient(H) : 0.0;

    std::vector<LinkResult> results;
    results.reserve(snr_grid_db.size());
    for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
        double snr_db = snr_grid_db[si];
        LinkResult res;
        res.snr_db = snr_db;
        res.rho_measured = rho;
        res.trials = trials;
        res.ber_per_stream.assign(m, 0.0);

        std::vector<std::size_t> errs(m, 0);
        std::size_t bits_per_stream = 4 * sched.payload_len;
        for (std::uint64_t tr = 0; tr < trials; ++tr) {
            std::uint64_t trial_seed = derive_seed(base_seed, si, tr);
            Rng bit_rng(derive_seed(trial_seed, 0xb175ULL, 0));

            std::vector<Bits> msgs(m, Bits(bits_per_stream));
            for (auto& msg : msgs)
                for (auto& b : msg) b = static_cast<std::uint8_t>(bit_rng.bit());

            std::vector<Symbols> frame = build_frame(msgs, sched, pilot_seed);
            std::vector<Symbols> y =
                apply_channel(frame, H.entries, snr_db,
                              derive_seed(trial_seed, 0x6e6f6973ULL, 0));

            arma::cx_mat h = csi == CsiMode::Perfect
                                 ? H.entries
                                 : zf_channel_estimate(y, pilots, sched);
            if (tr == 0) res.h_est = h;

            std::vector<Symbols> ymsg(n);
            std::size_t off = m * sched.pilot_len;
            for (std::size_t i = 0; i < n; ++i)
                ymsg[i] = Symbols(y[i].begin() + off, y[i].end());

            std::vector<Symbols> xhat = equalize(ymsg, h, eq);
            for (std::size_t i = 0; i < m; ++i) {
                Bits rxb = qam16_demodulate(xhat[i]);
                for (std::size_t bidx = 0; bidx < bits_per_stream; ++bidx)
                    if (rxb[bidx] != msgs[i][bidx]) ++errs[i];
            }
        }
        for (std::size_t i = 0; i < m; ++i)
            res.ber_per_stream[i] =
                static_cast<double>(errs[i]) / (static_cast<double>(trials) * bits_per_stream);
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace oamlink
