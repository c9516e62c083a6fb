#include "oamlink/channel.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include <nlohmann/json.hpp>

namespace oamlink {

namespace {

constexpr double kPi = std::numbers::pi;

double clamped_acos(double c) { return std::acos(std::max(-1.0, std::min(1.0, c))); }

// cos^{q/2} amplitude lobe about a pointing direction, zero past 90 degrees.
double horn_amplitude(double deviation, double q) {
    double c = std::cos(deviation);
    return c > 0.0 ? std::pow(c, q / 2.0) : 0.0;
}

// Frame of a steered NTCS beam. The pattern's own peak sits at (theta0,
// phi_pk) relative to its axis, so the axis is tilted away from the pointing
// direction p by theta0 (within the vertical plane through p) and azimuths
// are offset so that p lands exactly on the scanned peak.
struct BeamFrame {
    Vec3 axis, e1, e2;
    double phi_offset;
};

BeamFrame steer_frame(const Vec3& p, double theta0, double phi_pk) {
    Vec3 zhat{0.0, 0.0, 1.0};
    Vec3 v = zhat - p * dot(zhat, p);
    if (norm(v) < 1e-12) {
        Vec3 xhat{1.0, 0.0, 0.0};
        v = xhat - p * dot(xhat, p);
    }
    v = normalized(v);
    double ct = std::cos(theta0), st = std::sin(theta0);
    Vec3 axis = p * ct + v * st;
    Vec3 e1 = std::abs(st) < 1e-12 ? v : (p - axis * ct) / st;
    Vec3 e2 = cross(axis, e1);
    return {axis, e1, e2, phi_pk};
}

struct BeamDirection {
    double theta, phi;
};

BeamDirection frame_angles(const BeamFrame& f, const Vec3& u) {
    double theta = clamped_acos(dot(u, f.axis));
    double phi = std::atan2(dot(u, f.e2), dot(u, f.e1)) + f.phi_offset;
    return {theta, phi};
}

ChannelMatrix build_channel(const ArrayGeometry& geom, const WaveParameters& wave,
                            double beta, const std::vector<BeamSpec>* beams,
                            const BeamSpec* gain_model, const BeamSpec& rx_model,
                            int truncation) {
    std::size_t m = geom.tx.size(), n = geom.rx.size();
    if (m == 0 || n == 0) throw InvalidGeometry("empty array");
    if (!(beta > 0.0)) throw InvalidGeometry("beta must be positive");

    Vec3 txc, rxc;
    for (const auto& p : geom.tx) txc = txc + p.position;
    for (const auto& p : geom.rx) rxc = rxc + p.position;
    txc = txc / static_cast<double>(m);
    rxc = rxc / static_cast<double>(n);
    double dbar = norm(rxc - txc);
    if (!(dbar > 0.0)) throw InvalidGeometry("coincident array centroids");

    std::complex<double> scale = beta * wave.wavelength / (4.0 * kPi * dbar) *
                                 std::polar(1.0, -wave.wavenumber * dbar);
    double q_rx = horn_exponent(rx_model.beamwidth_deg);
    double g_rx = std::sqrt(std::pow(10.0, rx_model.peak_gain_db / 10.0));

    ChannelMatrix out;
    out.entries.set_size(n, m);
    out.frequency = wave.frequency;
    out.beta = beta;
    out.provenance = beams ? ChannelProvenance::NtcsOam : ChannelProvenance::PlaneWave;
    if (beams)
        for (const auto& b : *beams) out.modes.push_back(b.equivalent_mode);

    for (std::size_t mm = 0; mm < m; ++mm) {
        const Vec3& tpos = geom.tx[mm].position;
        const Vec3& p = geom.tx[mm].boresight;
        std::shared_ptr<const BeamPattern> pat;
        BeamFrame frame{};
        double g_tx, q_tx = 0.0;
        if (beams) {
            pat = shared_beam_pattern((*beams)[mm], wave, truncation);
            frame = steer_frame(p, pat->peak_theta(), pat->peak_phi());
            g_tx = std::sqrt(std::pow(10.0, (*beams)[mm].peak_gain_db / 10.0));
        } else {
            q_tx = horn_exponent(gain_model->beamwidth_deg);
            g_tx = std::sqrt(std::pow(10.0, gain_model->peak_gain_db / 10.0));
        }

        for (std::size_t nn = 0; nn < n; ++nn) {
            Vec3 u = normalized(geom.rx[nn].position - tpos);
            std::complex<double> t_amp;
            if (beams) {
                BeamDirection bd = frame_angles(frame, u);
                t_amp = pat->normalized(bd.theta, bd.phi);
            } else {
                t_amp = horn_amplitude(clamped_acos(dot(u, p)), q_tx);
            }
            Vec3 ur = normalized(tpos - geom.rx[nn].position);
            double r_amp = horn_amplitude(clamped_acos(dot(ur, geom.rx[nn].boresight)), q_rx);
            out.entries(nn, mm) = scale * g_tx * g_rx * t_amp * r_amp;
        }
    }
    return out;
}

}  // namespace

ChannelMatrix plane_wave_channel(const ArrayGeometry& geom, const WaveParameters& wave,
                                 double beta, const BeamSpec& gain_model,
                                 const BeamSpec& rx_model) {
    return build_channel(geom, wave, beta, nullptr, &gain_model, rx_model, 64);
}

ChannelMatrix oam_channel(const ArrayGeometry& geom, const WaveParameters& wave,
                          double beta, const std::vector<BeamSpec>& beams,
                          const BeamSpec& rx_model, int truncation) {
    if (beams.size() != geom.tx.size())
        throw InvalidGeometry("one beam spec required per tx element");
    return build_channel(geom, wave, beta, &beams, nullptr, rx_model, truncation);
}

arma::mat correlation_matrix(const ChannelMatrix& H) {
    const arma::cx_mat& A = H.entries;
    std::size_t n = A.n_rows;
    arma::vec power(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Sum |a|^2 directly; a sqrt/square round trip loses the exactness the
        // identity and rank-1 anchors rely on.
        power(i) = std::real(arma::cdot(A.row(i), A.row(i)));
        if (!(power(i) > 0.0)) throw ZeroRow("rx row has zero energy");
    }
    arma::mat R(n, n, arma::fill::eye);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::complex<double> inner = arma::cdot(A.row(j), A.row(i));
            double rho = std::abs(inner) / std::sqrt(power(i) * power(j));
            R(i, j) = R(j, i) = rho;
        }
    return R;
}

double correlation_coefficient(const ChannelMatrix& H) {
    arma::mat R = correlation_matrix(H);
    std::size_t n = R.n_rows;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, R(i, j));
    return best;
}

arma::cx_mat covariance(const ChannelMatrix& H) {
    return H.entries * H.entries.t();  // .t() is the conjugate transpose
}

double capacity_approx(const ChannelMatrix& H) {
    const arma::cx_mat& A = H.entries;
    if (A.n_rows != 2) throw DimensionMismatch("capacity_approx is defined for 2 rx rows");
    double p1 = std::real(arma::cdot(A.row(0), A.row(0)));
    double p2 = std::real(arma::cdot(A.row(1), A.row(1)));
    if (!(p1 > 0.0 && p2 > 0.0)) throw ZeroRow("rx row has zero energy");
    double rho = correlation_coefficient(H);
    double arg = p1 * p2 * (1.0 - rho * rho);
    if (arg <= 0.0) return -std::numeric_limits<double>::infinity();  // rank collapse
    return std::log2(arg);
}

double shannon_capacity(const ChannelMatrix& H, double snr) {
    if (!(snr >= 0.0)) throw InvalidGeometry("snr must be nonnegative");
    const arma::cx_mat& A = H.entries;
    double fro2 = std::pow(arma::norm(A, "fro"), 2);
    if (!(fro2 > 0.0)) throw ZeroRow("channel has no energy");
    double n = static_cast<double>(A.n_rows);
    double m = static_cast<double>(A.n_cols);
    arma::cx_mat Hn = A * std::sqrt(n / fro2);
    arma::cx_mat M = arma::eye<arma::cx_mat>(A.n_rows, A.n_rows) +
                     (snr / m) * (Hn * Hn.t());
    double ld = arma::log_det_sympd(arma::cx_mat(0.5 * (M + M.t())));
    return ld / std::log(2.0);
}

arma::vec singular_values(const ChannelMatrix& H) {
    return arma::svd(H.entries);  // armadillo returns descending order
}

double condition_number(const ChannelMatrix& H) {
    arma::vec sv = singular_values(H);
    double top = sv(0), bottom = sv(sv.n_elem - 1);
    if (!(bottom > 0.0)) return std::numeric_limits<double>::infinity();
    double ratio = (top / bottom) * (top / bottom);
    if (ratio > 1e18) return std::numeric_limits<double>::infinity();
    return ratio;
}

std::string channel_to_json(const ChannelMatrix& H) {
    nlohmann::json j;
    j["n"] = H.entries.n_rows;
    j["m"] = H.entries.n_cols;
    j["frequency_hz"] = H.frequency;
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < H.entries.n_rows; ++i)
        for (std::size_t k = 0; k < H.entries.n_cols; ++k)
            entries.push_back({H.entries(i, k).real(), H.entries(i, k).imag()});
    j["entries"] = entries;
    return j.dump(2);
}

ChannelMatrix channel_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("channel JSON: ") + e.what());
    }
    ChannelMatrix H;
    try {
        std::size_t n = j.at("n").get<std::size_t>();
        std::size_t m = j.at("m").get<std::size_t>();
        H.frequency = j.at("frequency_hz").get<double>();
        const auto& entries = j.at("entries");
        if (entries.size() != n * m)
            throw ValidationError("channel JSON: entries length != n*m");
        H.entries.set_size(n, m);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                H.entries(i, k) = {entries[idx][0].get<double>(),
                                   entries[idx][1].get<double>()};
                ++idx;
            }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("channel JSON: ") + e.what());
    }
    H.provenance = ChannelProvenance::Measured;
    return H;
}

}  // namespace oamlink
