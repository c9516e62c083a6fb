#pragma once

#include <armadillo>
#include <string>
#include <vector>

#include "oamlink/beam.hpp"
#include "oamlink/geometry.hpp"
#include "oamlink/wave.hpp"

namespace oamlink {

enum class ChannelProvenance { PlaneWave, NtcsOam, Measured };

struct ChannelMatrix {
    arma::cx_mat entries;  // n x m, rx-major
    double frequency = 0.0;
    double beta = 1.0;
    ChannelProvenance provenance = ChannelProvenance::PlaneWave;
    std::vector<int> modes;  // per-tx equivalent modes (NtcsOam)
};

// Both builders share the carrier reference: the common phase e^{-jk D} and
// spreading 1/D are taken at the centroid separation D of the two arrays, so
// entries differ only through the antenna patterns. Element-level path-length
// differences are far smaller than a pattern lobe at the ranges modeled here,
// and a shared reference keeps identical-pattern transmitters exactly
// rank-one, which is what the condition-number experiments measure.

// Plane-wave (horn) transmitters described by gain_model; every receiver is
// a horn described by rx_model.
ChannelMatrix plane_wave_channel(const ArrayGeometry& geom, const WaveParameters& wave,
                                 double beta, const BeamSpec& gain_model,
                                 const BeamSpec& rx_model);

// NTCS-OAM transmitters, one spec per tx element; horn receivers.
ChannelMatrix oam_channel(const ArrayGeometry& geom, const WaveParameters& wave,
                          double beta, const std::vector<BeamSpec>& beams,
                          const BeamSpec& rx_model, int truncation = 64);

// Max pairwise rx-row correlation: |<h_i, h_j>| / (|h_i| |h_j|). A 1-row
// channel reports 0. Throws ZeroRow when a row has no energy.
double correlation_coefficient(const ChannelMatrix& H);

// Full pairwise rx-row correlation magnitudes (symmetric, unit diagonal).
arma::mat correlation_matrix(const ChannelMatrix& H);

// R = H H^H (single deterministic realization).
arma::cx_mat covariance(const ChannelMatrix& H);

// log2(N (1 - rho^2)) with N the product of the two rx-row powers; equals
// log2 det(H H^H) for 2x2. Returns -inf when rho = 1 (rank collapse).
double capacity_approx(const ChannelMatrix& H);

// log2 det(I + snr/m * Hn Hn^H) where Hn rescales H to unit average
// received power per rx row (|Hn|_F^2 = n), so curves compare channel
// structure rather than absolute path loss.
double shannon_capacity(const ChannelMatrix& H, double snr);

// Nonnegative, descending.
arma::vec singular_values(const ChannelMatrix& H);

// (nu_max / nu_min)^2; ratios beyond 1e18 report infinity.
double condition_number(const ChannelMatrix& H);

// Threshold used to flag near-rank-deficient channels in table output.
inline bool numerically_singular(double eta_cond) { return eta_cond >= 1e10; }

// JSON round trip for externally measured matrices:
// {"n":..,"m":..,"frequency_hz":..,"entries":[[re,im],...]} row-major.
std::string channel_to_json(const ChannelMatrix& H);
ChannelMatrix channel_from_json(const std::string& text);

}  // namespace oamlink
