#pragma once

#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "oamlink/wave.hpp"

namespace oamlink {

enum class BeamKind { PlaneWave, NtcsOam };

struct BeamSpec {
    BeamKind kind = BeamKind::PlaneWave;
    int equivalent_mode = 0;                        // le (NtcsOam)
    double arc_angle = std::numbers::pi / 2.0;      // phi_c, rad (NtcsOam)
    double boresight_azimuth = 0.0;                 // phi_d, rad
    double source_radius = 0.0;                     // r, m (NtcsOam)
    double peak_gain_db = 16.0;
    double amplitude_scale = 1.0;                   // absorbs source-current constants
    double beamwidth_deg = 36.0;                    // plane-wave 3 dB width (full angle)
};

// Convenience: NTCS spec with the arc radius sized for the requested mode.
BeamSpec make_ntcs_spec(int le, const WaveParameters& wave, const WaveguideSpec& wg,
                        double arc_angle = std::numbers::pi / 2.0,
                        double boresight_azimuth = 0.0, double peak_gain_db = 16.0);

struct PatternCut {
    std::vector<double> angles;     // azimuth, rad, strictly increasing
    std::vector<double> amplitude;  // linear magnitude
    std::vector<double> phase;      // unwrapped, rad
    double polar_angle = 0.0;       // theta of the cut, rad
};

// cos^q exponent whose full 3 dB width equals beamwidth_deg.
double horn_exponent(double beamwidth_deg);

// Doughnut-mode far field: amplitude_scale * e^{-jkd}/(2d) * J_le(kr sin th) * e^{-j le phi}.
std::complex<double> single_mode_field(const BeamSpec& spec, const WaveParameters& wave,
                                       double d, double theta, double phi);

// Sinc-weighted mode superposition truncated to |l - le| <= K. Raises
// TruncationTooSmall when the first omitted term is not negligible
// (> 1e-4 of the retained absolute sum).
std::complex<double> ntcs_field(const BeamSpec& spec, const WaveParameters& wave,
                                double d, double theta, double phi, int truncation = 64);

// Sample the field along an azimuth grid at fixed polar angle; phases are
// unwrapped with the adjacent-sample pi-jump rule.
PatternCut pattern_cut(const BeamSpec& spec, const WaveParameters& wave, double theta,
                       const std::vector<double>& azimuth_grid, double d, int truncation = 64);

// Least-squares phase slope over the 3 dB main lobe, negated to match the
// e^{-j l phi} sign convention; the result estimates le.
double main_lobe_phase_slope(const PatternCut& cut);

// |field|^2 normalized so the pattern maximum equals 10^(peak_gain_db/10).
// PlaneWave kind: idealized cos^q(theta) lobe with the same peak gain.
double gain_pattern(const BeamSpec& spec, const WaveParameters& wave,
                    double theta, double phi, int truncation = 64);

// Polar angle maximizing |J_le(kr sin theta)| on (0, pi/2]: the cone of the
// center mode, used as the default pattern-cut elevation.
double center_mode_peak_polar(const BeamSpec& spec, const WaveParameters& wave);

// Precomputed NTCS pattern: mode weights plus the scanned global peak, so
// channel builders can steer the lobe and normalize gain without rescanning.
class BeamPattern {
public:
    BeamPattern(const BeamSpec& spec, const WaveParameters& wave, int truncation = 64);

    // Angular factor sum_l w_l J_l(kr sin th) e^{-j l (phi - phi_d)};
    // excludes the 1/2d spreading and constant phase factors.
    std::complex<double> angular_sum(double theta, double phi) const;

    // angular_sum normalized to unit peak magnitude.
    std::complex<double> normalized(double theta, double phi) const;

    double peak_theta() const { return theta0_; }
    double peak_phi() const { return phi_peak_; }
    double peak_magnitude() const { return peak_; }
    const BeamSpec& spec() const { return spec_; }

private:
    void scan_peak();

    BeamSpec spec_;
    double kr_ = 0.0;
    int K_ = 64;
    std::vector<double> weights_;  // sinc weights for l = le-K .. le+K
    double theta0_ = 0.0;          // polar angle of the global pattern peak
    double phi_peak_ = 0.0;        // azimuth of the peak
    double peak_ = 1.0;            // |angular_sum| at the peak
};

// Memoized pattern lookup; construction scans for the peak, so repeated
// channel builds share one instance per distinct spec.
std::shared_ptr<const BeamPattern> shared_beam_pattern(const BeamSpec& spec,
                                                       const WaveParameters& wave,
                                                       int truncation = 64);

}  // namespace oamlink
