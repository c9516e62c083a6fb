#include "oamlink/beam.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <tuple>

#include "oamlink/bessel.hpp"

namespace oamlink {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sinc_weights(int le, double arc_angle, int K) {
    std::vector<double> w(static_cast<size_t>(2 * K) + 1);
    for (int i = 0; i <= 2 * K; ++i) {
        int l = le - K + i;
        w[i] = sinc(arc_angle * (l - le) / 2.0);
    }
    return w;
}

// Radix-2 forward DFT (sign -1), in place; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a) {
    size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        std::complex<double> wlen = std::polar(1.0, -2.0 * std::numbers::pi
                                                         / static_cast<double>(len));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

struct SumEval {
    std::complex<double> value;
    double retained_abs;
    double omitted_abs;
};

// Core mode-superposition sum at one (theta, phi). J values for the two
// boundary orders just outside the truncation window ride along so callers
// can check the omitted-tail diagnostic without a second Bessel sweep.
SumEval eval_mode_sum(int le, double arc_angle, double phi_d, double kr, int K,
                      double theta, double phi) {
    double x = kr * std::sin(theta);
    int lo = le - K, hi = le + K;
    std::vector<double> J = bessel_j_orders(lo - 1, hi + 1, x);

    double psi = phi - phi_d;
    std::complex<double> rot = std::polar(1.0, -static_cast<double>(lo) * psi);
    std::complex<double> step = std::polar(1.0, -psi);
    std::complex<double> acc{0.0, 0.0};
    double retained = 0.0;
    for (int i = 0; i <= 2 * K; ++i) {
        int l = lo + i;
        double w = sinc(arc_angle * (l - le) / 2.0);
        double wj = w * J[i + 1];
        acc += wj * rot;
        retained += std::abs(wj);
        rot *= step;
    }
    double w_out = std::abs(sinc(arc_angle * (K + 1) / 2.0));
    double omitted = w_out * std::max(std::abs(J.front()), std::abs(J.back()));
    return {acc, retained, omitted};
}

// Mode 0 is a legal degenerate composite when the spec carries an explicit
// radius; only radius_for_mode excludes it.
void require_ntcs(const BeamSpec& spec) {
    if (spec.kind != BeamKind::NtcsOam)
        throw InvalidBeamSpec("operation requires an NtcsOam beam");
    if (!(spec.arc_angle > 0.0 && spec.arc_angle <= 2.0 * kPi + 1e-12))
        throw InvalidBeamSpec("arc angle must lie in (0, 2pi]");
    if (!(spec.source_radius > 0.0))
        throw InvalidBeamSpec("source radius must be positive");
}

void check_tail(const SumEval& s) {
    if (s.omitted_abs > 1e-4 * s.retained_abs)
        throw TruncationTooSmall("omitted mode weight exceeds 1e-4 of retained sum; "
                                 "increase the truncation order");
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

BeamSpec make_ntcs_spec(int le, const WaveParameters& wave, const WaveguideSpec& wg,
                        double arc_angle, double boresight_azimuth, double peak_gain_db) {
    BeamSpec spec;
    spec.kind = BeamKind::NtcsOam;
    spec.equivalent_mode = le;
    spec.arc_angle = arc_angle;
    spec.boresight_azimuth = boresight_azimuth;
    spec.source_radius = radius_for_mode(le, wave, wg);
    spec.peak_gain_db = peak_gain_db;
    return spec;
}

double horn_exponent(double beamwidth_deg) {
    double half = beamwidth_deg / 2.0 * kPi / 180.0;
    return std::log(0.5) / std::log(std::cos(half));
}

std::complex<double> single_mode_field(const BeamSpec& spec, const WaveParameters& wave,
                                       double d, double theta, double phi) {
    // Unlike the composite source, the full-circle case admits l0 = 0.
    if (spec.kind != BeamKind::NtcsOam)
        throw InvalidBeamSpec("operation requires an NtcsOam beam");
    if (!(spec.source_radius > 0.0))
        throw InvalidBeamSpec("source radius must be positive");
    if (std::abs(spec.arc_angle - 2.0 * kPi) > 1e-9)
        throw InvalidBeamSpec("single-mode field is the full-circle (phi_c = 2pi) case");
    if (!(d > 0.0)) throw InvalidDistance("field distance must be positive");

    int l0 = spec.equivalent_mode;
    double x = wave.wavenumber * spec.source_radius * std::sin(theta);
    std::complex<double> ct =
        spec.amplitude_scale / (2.0 * d) * std::polar(1.0, -wave.wavenumber * d);
    return ct * bessel_j(l0, x) * std::polar(1.0, -l0 * phi);
}

std::complex<double> ntcs_field(const BeamSpec& spec, const WaveParameters& wave,
                                double d, double theta, double phi, int truncation) {
    require_ntcs(spec);
    if (!(d > 0.0)) throw InvalidDistance("field distance must be positive");
    if (truncation < 1) throw InvalidBeamSpec("truncation order must be >= 1");

    double kr = wave.wavenumber * spec.source_radius;
    SumEval s = eval_mode_sum(spec.equivalent_mode, spec.arc_angle, spec.boresight_azimuth,
                              kr, truncation, theta, phi);
    check_tail(s);
    std::complex<double> ct =
        spec.amplitude_scale / (2.0 * d) * std::polar(1.0, -wave.wavenumber * d);
    std::complex<double> mode_phase =
        std::polar(1.0, -spec.equivalent_mode * spec.arc_angle / 2.0);
    return ct * mode_phase * s.value;
}

PatternCut pattern_cut(const BeamSpec& spec, const WaveParameters& wave, double theta,
                       const std::vector<double>& azimuth_grid, double d, int truncation) {
    if (azimuth_grid.size() < 3)
        throw InsufficientSamples("pattern cut needs at least 3 azimuth samples");
    for (size_t i = 1; i < azimuth_grid.size(); ++i)
        if (!(azimuth_grid[i] > azimuth_grid[i - 1]))
            throw InvalidBeamSpec("azimuth grid must be strictly increasing");

    PatternCut cut;
    cut.polar_angle = theta;
    cut.angles = azimuth_grid;
    cut.amplitude.reserve(azimuth_grid.size());
    cut.phase.reserve(azimuth_grid.size());

    double prev_unwrapped = 0.0;
    bool first = true;
    double prev_raw = 0.0;
    for (double phi : azimuth_grid) {
        std::complex<double> f;
        if (spec.kind == BeamKind::NtcsOam) {
            f = ntcs_field(spec, wave, d, theta, phi, truncation);
        } else {
            // Plane-wave: azimuth-independent cos^{q/2} lobe, flat phase front.
            if (!(d > 0.0)) throw InvalidDistance("field distance must be positive");
            double q = horn_exponent(spec.beamwidth_deg);
            double c = std::cos(theta);
            double amp = c > 0.0 ? std::pow(c, q / 2.0) : 0.0;
            f = spec.amplitude_scale / (2.0 * d) *
                std::polar(1.0, -wave.wavenumber * d) * amp;
        }
        cut.amplitude.push_back(std::abs(f));
        double raw = std::arg(f);
        if (first) {
            prev_unwrapped = raw;
            first = false;
        } else {
            double delta = raw - prev_raw;
            // map the increment to (-pi, pi]
            delta -= 2.0 * kPi * std::floor((delta + kPi) / (2.0 * kPi));
            prev_unwrapped += delta;
        }
        prev_raw = raw;
        cut.phase.push_back(prev_unwrapped);
    }
    return cut;
}

double main_lobe_phase_slope(const PatternCut& cut) {
    size_t n = cut.amplitude.size();
    if (n < 3) throw NoMainLobe("cut too short");

    size_t imax = 0;
    for (size_t i = 1; i < n; ++i)
        if (cut.amplitude[i] > cut.amplitude[imax]) imax = i;
    double peak = cut.amplitude[imax];
    if (!(peak > 0.0)) throw NoMainLobe("cut has no positive amplitude");

    double thr = peak / std::sqrt(2.0);
    size_t lo = imax, hi = imax;
    while (lo > 0 && cut.amplitude[lo - 1] >= thr) --lo;
    while (hi + 1 < n && cut.amplitude[hi + 1] >= thr) ++hi;
    if (hi - lo + 1 < 5)
        throw InsufficientSamples("fewer than 5 samples inside the 3 dB window");

    // least squares on phase vs azimuth restricted to [lo, hi]
    double sx = 0.0, sy = 0.0;
    size_t cnt = hi - lo + 1;
    for (size_t i = lo; i <= hi; ++i) {
        sx += cut.angles[i];
        sy += cut.phase[i];
    }
    double mx = sx / cnt, my = sy / cnt;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = lo; i <= hi; ++i) {
        double dx = cut.angles[i] - mx;
        sxx += dx * dx;
        sxy += dx * (cut.phase[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientSamples("degenerate azimuth window");
    return -sxy / sxx;
}

double center_mode_peak_polar(const BeamSpec& spec, const WaveParameters& wave) {
    if (spec.kind == BeamKind::PlaneWave) return 0.0;
    require_ntcs(spec);
    double kr = wave.wavenumber * spec.source_radius;
    int le = std::abs(spec.equivalent_mode);

    auto f = [&](double th) { return std::abs(bessel_j(le, kr * std::sin(th))); };

    // coarse scan, then golden-section refinement around the best sample
    const int N = 20000;
    double best_th = kPi / 2.0, best_v = -1.0;
    for (int i = 1; i <= N; ++i) {
        double th = kPi / 2.0 * i / N;
        double v = f(th);
        if (v > best_v) {
            best_v = v;
            best_th = th;
        }
    }
    double a = std::max(1e-6, best_th - kPi / 2.0 / N);
    double b = std::min(kPi / 2.0, best_th + kPi / 2.0 / N);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), dpt = a + gr * (b - a);
    double fc = f(c), fd = f(dpt);
    for (int it = 0; it < 80; ++it) {
        if (fc > fd) {
            b = dpt; dpt = c; fd = fc;
            c = b - gr * (b - a); fc = f(c);
        } else {
            a = c; c = dpt; fc = fd;
            dpt = a + gr * (b - a); fd = f(dpt);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// BeamPattern

BeamPattern::BeamPattern(const BeamSpec& spec, const WaveParameters& wave, int truncation)
    : spec_(spec), K_(truncation) {
    require_ntcs(spec);
    if (truncation < 1) throw InvalidBeamSpec("truncation order must be >= 1");
    kr_ = wave.wavenumber * spec.source_radius;
    weights_ = sinc_weights(spec.equivalent_mode, spec.arc_angle, K_);
    scan_peak();
}

std::complex<double> BeamPattern::angular_sum(double theta, double phi) const {
    SumEval s = eval_mode_sum(spec_.equivalent_mode, spec_.arc_angle,
                              spec_.boresight_azimuth, kr_, K_, theta, phi);
    check_tail(s);
    return s.value;
}

std::complex<double> BeamPattern::normalized(double theta, double phi) const {
    return angular_sum(theta, phi) / peak_;
}

void BeamPattern::scan_peak() {
    int le = spec_.equivalent_mode;
    double phi_d = spec_.boresight_azimuth;
    int lo = le - K_;

    // Evaluate |sum| on a theta x phi grid; the tail check is skipped here
    // because high-theta skirt samples can have a non-negligible omitted
    // tail, yet sit far below the main lobe and cannot move the peak.
    // Rows are independent, so the scan is chunked across threads. Each chunk
    // keeps its first strict maximum and chunks are merged in ascending row
    // order with a strict compare, so the winner is the exact sample a serial
    // scan would pick, bit for bit.
    auto grid_best = [&](const std::vector<double>& ths, const std::vector<double>& phs,
                         double& th_best, double& ph_best) {
        struct Best {
            double v = -1.0;
            double th = 0.0;
            double ph = 0.0;
        };
        auto scan_rows = [&](size_t i0, size_t i1, Best& out) {
            for (size_t ti = i0; ti < i1; ++ti) {
                double th = ths[ti];
                double x = kr_ * std::sin(th);
                std::vector<double> J = bessel_j_orders(lo, le + K_, x);
                for (double ph : phs) {
                    double psi = ph - phi_d;
                    std::complex<double> rot = std::polar(1.0, -static_cast<double>(lo) * psi);
                    std::complex<double> step = std::polar(1.0, -psi);
                    std::complex<double> acc{0.0, 0.0};
                    for (size_t i = 0; i < weights_.size(); ++i) {
                        acc += weights_[i] * J[i] * rot;
                        rot *= step;
                    }
                    double a = std::abs(acc);
                    if (a > out.v) {
                        out.v = a;
                        out.th = th;
                        out.ph = ph;
                    }
                }
            }
        };
        unsigned hw = std::thread::hardware_concurrency();
        size_t nthreads = std::min<size_t>(hw == 0 ? 1 : hw, 16);
        nthreads = std::min(nthreads, ths.size());
        std::vector<Best> parts(std::max<size_t>(nthreads, 1));
        if (nthreads <= 1) {
            scan_rows(0, ths.size(), parts[0]);
        } else {
            std::vector<std::thread> workers;
            size_t chunk = (ths.size() + nthreads - 1) / nthreads;
            for (size_t t = 0; t < nthreads; ++t) {
                size_t i0 = t * chunk;
                size_t i1 = std::min(ths.size(), i0 + chunk);
                if (i0 >= i1) break;
                workers.emplace_back(scan_rows, i0, i1, std::ref(parts[t]));
            }
            for (auto& w : workers) w.join();
        }
        Best overall;
        for (const Best& p : parts) {
            if (p.v > overall.v) overall = p;
        }
        th_best = overall.th;
        ph_best = overall.ph;
        return overall.v;
    };

    std::vector<double> ths = linspace(1e-4, kPi / 2.0, 2000);
    const int N = 256;
    std::vector<double> phs(N);
    for (int i = 0; i < N; ++i) phs[i] = -kPi + 2.0 * kPi * i / N;

    // Coarse stage. On the uniform full-circle azimuth grid the row sweep
    // sum_l w_l J_l e^{-jl(phi - phi_d)} is a trigonometric polynomial, so all
    // N samples fall out of one N-point transform of the coefficients folded
    // mod N (phi_0 = -pi contributes e^{+jl pi} = (-1)^l). Two orders of
    // magnitude cheaper than direct evaluation of the same samples.
    std::vector<std::complex<double>> coeff_rot(weights_.size());
    for (size_t i = 0; i < weights_.size(); ++i) {
        int l = lo + static_cast<int>(i);
        double sgn = (l % 2 != 0) ? -1.0 : 1.0;
        coeff_rot[i] = sgn * std::polar(1.0, l * phi_d);
    }
    struct CoarseBest {
        double v = -1.0;
        double th = 0.0;
        double ph = 0.0;
    };
    auto scan_fft_rows = [&](size_t i0, size_t i1, CoarseBest& out) {
        std::vector<std::complex<double>> bins(N);
        for (size_t ti = i0; ti < i1; ++ti) {
            double th = ths[ti];
            double x = kr_ * std::sin(th);
            std::vector<double> J = bessel_j_orders(lo, le + K_, x);
            std::fill(bins.begin(), bins.end(), std::complex<double>{0.0, 0.0});
            for (size_t i = 0; i < weights_.size(); ++i) {
                int l = lo + static_cast<int>(i);
                int m = ((l % N) + N) % N;
                bins[static_cast<size_t>(m)] += weights_[i] * J[i] * coeff_rot[i];
            }
            fft_inplace(bins);
            for (int i = 0; i < N; ++i) {
                double a = std::abs(bins[static_cast<size_t>(i)]);
                if (a > out.v) {
                    out.v = a;
                    out.th = th;
                    out.ph = phs[static_cast<size_t>(i)];
                }
            }
        }
    };
    unsigned hw_c = std::thread::hardware_concurrency();
    size_t nthreads_c = std::min<size_t>(hw_c == 0 ? 1 : hw_c, 16);
    nthreads_c = std::min(nthreads_c, ths.size());
    std::vector<CoarseBest> parts_c(std::max<size_t>(nthreads_c, 1));
    if (nthreads_c <= 1) {
        scan_fft_rows(0, ths.size(), parts_c[0]);
    } else {
        std::vector<std::thread> workers;
        size_t chunk = (ths.size() + nthreads_c - 1) / nthreads_c;
        for (size_t t = 0; t < nthreads_c; ++t) {
            size_t i0 = t * chunk;
            size_t i1 = std::min(ths.size(), i0 + chunk);
            if (i0 >= i1) break;
            workers.emplace_back(scan_fft_rows, i0, i1, std::ref(parts_c[t]));
        }
        for (auto& w : workers) w.join();
    }
    CoarseBest coarse;
    for (const CoarseBest& p : parts_c) {
        if (p.v > coarse.v) coarse = p;
    }
    double th0 = coarse.th, ph0 = coarse.ph;

    for (int round = 0; round < 4; ++round) {
        ths = linspace(std::max(1e-5, th0 - 0.01), std::min(kPi / 2.0, th0 + 0.01), 81);
        phs = linspace(ph0 - 0.05, ph0 + 0.05, 81);
        grid_best(ths, phs, th0, ph0);
    }
    theta0_ = th0;
    phi_peak_ = ph0;
    SumEval s = eval_mode_sum(le, spec_.arc_angle, phi_d, kr_, K_, th0, ph0);
    peak_ = std::abs(s.value);
}

// ---------------------------------------------------------------------------
// gain pattern with a process-wide pattern cache

namespace {

using PatternKey = std::tuple<int, double, double, double, double, int>;

std::shared_ptr<const BeamPattern> pattern_cached(const BeamSpec& spec,
                                                  const WaveParameters& wave, int K) {
    static std::mutex mu;
    static std::map<PatternKey, std::shared_ptr<const BeamPattern>> cache;
    PatternKey key{spec.equivalent_mode, spec.arc_angle, spec.boresight_azimuth,
                   spec.source_radius, wave.wavelength, K};
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto p = std::make_shared<const BeamPattern>(spec, wave, K);
    cache.emplace(key, p);
    return p;
}

}  // namespace

std::shared_ptr<const BeamPattern> shared_beam_pattern(const BeamSpec& spec,
                                                       const WaveParameters& wave,
                                                       int truncation) {
    return pattern_cached(spec, wave, truncation);
}

double gain_pattern(const BeamSpec& spec, const WaveParameters& wave,
                    double theta, double phi, int truncation) {
    double peak_lin = std::pow(10.0, spec.peak_gain_db / 10.0);
    if (spec.kind == BeamKind::PlaneWave) {
        double q = horn_exponent(spec.beamwidth_deg);
        double c = std::cos(theta);
        return c > 0.0 ? peak_lin * std::pow(c, q) : 0.0;
    }
    auto pat = pattern_cached(spec, wave, truncation);
    double a = std::abs(pat->normalized(theta, phi));
    return peak_lin * a * a;
}

}  // namespace oamlink
