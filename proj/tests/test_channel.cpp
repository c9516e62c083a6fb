#include "doctest.h"

#include <armadillo>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <oamlink/channel.hpp>
#include <oamlink/errors.hpp>
#include <oamlink/scenario.hpp>

using namespace oamlink;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

ChannelMatrix measured(const arma::cx_mat& m) {
    ChannelMatrix H;
    H.entries = m;
    H.frequency = 1.0e10;
    H.provenance = ChannelProvenance::Measured;
    return H;
}

Scenario fig6_scenario() {
    return parse_scenario(std::string(OAMLINK_SCENARIO_DIR) + "/fig6.scenario");
}

struct Fig6Freeze {
    std::vector<int> modes;
    double eta;
    double rho;
    double cap20;
};

const Fig6Freeze kFig6[] = {
    {{1, 2}, 718.3042317318095, 0.9972195353346044, 6.844021466497487},
    {{3, 5}, 179.0035884318837, 0.988889110392614, 7.287673768979571},
    {{7, 11}, 44.16569654998512, 0.9557186060933021, 8.310634887293578},
    {{25, 35}, 6.2851857956878465, 0.7254702822816927, 10.32781328668394},
};

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("single-link free-space budget") {
    Scenario s;
    s.tx_count = 1;
    s.rx_count = 1;
    s.peak_gain_db = 0.0;
    ArrayGeometry geom = scenario_geometry(s);
    WaveParameters wave = scenario_wave(s);
    BeamSpec horn = scenario_horn_spec(s);
    ChannelMatrix H = plane_wave_channel(geom, wave, 1.0, horn, horn);
    REQUIRE(H.entries.n_rows == 1);
    REQUIRE(H.entries.n_cols == 1);
    cplx h = H.entries(0, 0);

    // 10 m boresight link with 0 dB gains: |h| = lambda / (4 pi d)
    CHECK(std::abs(h) == doctest::Approx(wave.wavelength / (40.0 * kPi)).epsilon(1e-15));
    CHECK(std::abs(h) == doctest::Approx(0.0002385672579618471).epsilon(1e-14));
    double phase_err =
        std::remainder(std::arg(h) + wave.wavenumber * 10.0, 2.0 * kPi);
    CHECK(std::abs(phase_err) < 1e-9);
    CHECK(H.provenance == ChannelProvenance::PlaneWave);

    SUBCASE("doubling the range halves the magnitude") {
        Scenario far = s;
        far.range_m = 20.0;
        ChannelMatrix H2 = plane_wave_channel(scenario_geometry(far), wave, 1.0, horn, horn);
        CHECK(std::abs(h) / std::abs(H2.entries(0, 0)) ==
              doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("beta scales every entry") {
        ChannelMatrix Hb = plane_wave_channel(geom, wave, 0.25, horn, horn);
        CHECK(std::abs(Hb.entries(0, 0)) ==
              doctest::Approx(0.25 * std::abs(h)).epsilon(1e-14));
    }
}

TEST_CASE("symmetric horn geometry yields a symmetric near-rank-1 matrix") {
    Scenario s;  // defaults: 2x2, 0.2 m spacings, 10 m
    ChannelMatrix H = plane_wave_channel(scenario_geometry(s), scenario_wave(s), 1.0,
                                         scenario_horn_spec(s), scenario_horn_spec(s));
    CHECK(std::abs(H.entries(0, 1) - H.entries(1, 0)) < 1e-14 * std::abs(H.entries(0, 1)));
    CHECK(std::abs(H.entries(0, 0) - H.entries(1, 1)) < 1e-14 * std::abs(H.entries(0, 0)));
    // One carrier reference at the centroid spacing: entries differ only through
    // the gain taper, so the four magnitudes stay within a hair of each other,
    // the carrier phase is common, and the matrix is as good as rank one.
    double lo = 1e300, hi = 0.0;
    for (const auto& v : H.entries) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
    }
    CHECK(hi / lo < 1.0 + 1e-5);
    CHECK(std::abs(std::arg(H.entries(0, 1)) - std::arg(H.entries(0, 0))) < 1e-12);
    CHECK(condition_number(H) > 1e10);
}

TEST_CASE("mode-zero full-circle transmitter reduces to the plane-wave channel") {
    Scenario s;
    s.tx_count = 1;
    s.rx_count = 1;
    ArrayGeometry geom = scenario_geometry(s);
    WaveParameters wave = scenario_wave(s);
    BeamSpec horn = scenario_horn_spec(s);

    BeamSpec zero;
    zero.kind = BeamKind::NtcsOam;
    zero.equivalent_mode = 0;
    zero.arc_angle = 2.0 * kPi;  // pure J_0 pattern, peak on axis like the horn
    zero.source_radius = 0.05;
    zero.peak_gain_db = horn.peak_gain_db;

    ChannelMatrix ref = plane_wave_channel(geom, wave, 1.0, horn, horn);
    ChannelMatrix oam = oam_channel(geom, wave, 1.0, {zero}, horn);
    CHECK(std::abs(oam.entries(0, 0) - ref.entries(0, 0)) <
          1e-9 * std::abs(ref.entries(0, 0)));
    CHECK(oam.provenance == ChannelProvenance::NtcsOam);
    REQUIRE(oam.modes.size() == 1);
    CHECK(oam.modes[0] == 0);
}

TEST_CASE("reference-table channels are frozen") {
    Scenario s = fig6_scenario();
    for (const auto& f : kFig6) {
        CAPTURE(f.modes[0]);
        ChannelMatrix H = scenario_channel_square(s, 2, f.modes);
        CHECK(condition_number(H) == doctest::Approx(f.eta).epsilon(1e-9));
        CHECK(correlation_coefficient(H) == doctest::Approx(f.rho).epsilon(1e-9));
        CHECK(shannon_capacity(H, 100.0) == doctest::Approx(f.cap20).epsilon(1e-9));
        CHECK_FALSE(numerically_singular(condition_number(H)));
    }
    ChannelMatrix horn = scenario_channel_square(s, 2, {});
    double eta = condition_number(horn);
    CHECK(eta == doctest::Approx(52455225147276.484).epsilon(1e-6));
    CHECK(numerically_singular(eta));
    CHECK(correlation_coefficient(horn) > 1.0 - 1e-12);
    CHECK(shannon_capacity(horn, 100.0) == doctest::Approx(6.658211482754526).epsilon(1e-9));
}

TEST_CASE("paired-aim mode channel entries are frozen") {
    Scenario s = parse_scenario(std::string(OAMLINK_SCENARIO_DIR) + "/fig13_oam.scenario");
    ChannelMatrix H = scenario_channel(s);
    REQUIRE(H.entries.n_rows == 2);
    const cplx expect[2][2] = {
        {{-0.029427068622921913, -0.024027025317961446},
         {0.0007809255777022499, 0.005390839101853994}},
        {{-0.004567845433963872, 0.002038854859490234},
         {-0.02942706862292204, -0.024027025317961172}},
    };
    double scale = std::abs(expect[0][0]);
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m)
            CHECK(std::abs(H.entries(n, m) - expect[n][m]) < 1e-9 * scale);
    CHECK(correlation_coefficient(H) ==
          doctest::Approx(0.04993092612291681).epsilon(1e-9));
    CHECK(condition_number(H) == doctest::Approx(1.1051653785771598).epsilon(1e-9));
}

TEST_CASE("row correlation: exact anchors") {
    CHECK(correlation_coefficient(measured(arma::cx_mat(arma::mat{{1.0, 0.0}, {0.0, 1.0}},
                                                        arma::mat(2, 2, arma::fill::zeros)))) ==
          0.0);
    CHECK(correlation_coefficient(measured(arma::cx_mat(arma::mat{{1.0, 1.0}, {1.0, 1.0}},
                                                        arma::mat(2, 2, arma::fill::zeros)))) ==
          1.0);
    CHECK(correlation_coefficient(measured(
              arma::cx_mat(arma::mat{{3.0, 4.0}}, arma::mat(1, 2, arma::fill::zeros)))) == 0.0);
    CHECK(correlation_coefficient(measured(arma::cx_mat(
              arma::mat{{1.0, 2.0}, {2.0, 4.0}}, arma::mat(2, 2, arma::fill::zeros)))) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(correlation_coefficient(measured(arma::cx_mat(
                        arma::mat{{1.0, 2.0}, {0.0, 0.0}}, arma::mat(2, 2, arma::fill::zeros)))),
                    ZeroRow);
}

TEST_CASE("row correlation is scale and per-row-phase invariant") {
    arma::cx_mat base{{cplx(0.3, -1.2), cplx(0.7, 0.4)}, {cplx(-0.5, 0.8), cplx(1.1, -0.2)}};
    double rho = correlation_coefficient(measured(base));
    CHECK(rho > 0.0);
    CHECK(rho < 1.0);

    arma::cx_mat scaled = base * cplx(3.0e-7 * std::cos(0.3), 3.0e-7 * std::sin(0.3));
    CHECK(correlation_coefficient(measured(scaled)) == doctest::Approx(rho).epsilon(1e-14));

    arma::cx_mat rotated = base;
    rotated.row(0) *= std::polar(1.0, 1.9);
    rotated.row(1) *= std::polar(1.0, -0.4);
    CHECK(correlation_coefficient(measured(rotated)) == doctest::Approx(rho).epsilon(1e-14));
}

TEST_CASE("correlation matrix agrees with the pairwise maximum") {
    arma::cx_mat m{{cplx(1.0, 0.2), cplx(0.1, 0.0), cplx(0.0, -0.3)},
                   {cplx(0.4, 0.0), cplx(1.0, 0.0), cplx(0.2, 0.1)},
                   {cplx(0.0, 0.1), cplx(0.3, -0.2), cplx(1.0, 0.5)}};
    ChannelMatrix H = measured(m);
    arma::mat R = correlation_matrix(H);
    REQUIRE(R.n_rows == 3);
    double best = 0.0;
    for (arma::uword i = 0; i < 3; ++i) {
        CHECK(R(i, i) == doctest::Approx(1.0).epsilon(1e-14));
        for (arma::uword j = 0; j < 3; ++j) {
            CHECK(R(i, j) == doctest::Approx(R(j, i)).epsilon(1e-14));
            if (i != j) best = std::max(best, R(i, j));
        }
    }
    CHECK(correlation_coefficient(H) == doctest::Approx(best).epsilon(1e-14));
}

TEST_CASE("two-stream capacity proxy") {
    ChannelMatrix eye = measured(
        arma::cx_mat(arma::mat{{1.0, 0.0}, {0.0, 1.0}}, arma::mat(2, 2, arma::fill::zeros)));
    CHECK(capacity_approx(eye) == 0.0);

    ChannelMatrix flat = measured(
        arma::cx_mat(arma::mat{{1.0, 1.0}, {1.0, 1.0}}, arma::mat(2, 2, arma::fill::zeros)));
    CHECK(std::isinf(capacity_approx(flat)));
    CHECK(capacity_approx(flat) < 0.0);

    ChannelMatrix wide = measured(arma::cx_mat(arma::mat(3, 2, arma::fill::ones),
                                               arma::mat(3, 2, arma::fill::zeros)));
    CHECK_THROWS_AS(capacity_approx(wide), DimensionMismatch);
    ChannelMatrix one = measured(
        arma::cx_mat(arma::mat{{1.0, 2.0}}, arma::mat(1, 2, arma::fill::zeros)));
    CHECK_THROWS_AS(capacity_approx(one), DimensionMismatch);

    SUBCASE("matches the determinant of the covariance") {
        ChannelMatrix H = scenario_channel_square(fig6_scenario(), 2, {25, 35});
        double det = std::abs(arma::det(arma::cx_mat(H.entries * H.entries.t())));
        CHECK(capacity_approx(H) == doctest::Approx(std::log2(det)).epsilon(1e-9));
    }
}

TEST_CASE("normalized capacity") {
    ChannelMatrix H = measured(
        arma::cx_mat(arma::mat{{5.0, 0.0}, {0.0, 5.0}}, arma::mat(2, 2, arma::fill::zeros)));
    SUBCASE("identity shape at snr 2 gives exactly two bits") {
        CHECK(shannon_capacity(H, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("zero snr gives exactly zero") {
        CHECK(shannon_capacity(H, 0.0) == 0.0);
    }
    SUBCASE("negative snr is rejected") {
        CHECK_THROWS_AS(shannon_capacity(H, -0.1), InvalidGeometry);
    }
    SUBCASE("monotone in snr") {
        ChannelMatrix F = scenario_channel_square(fig6_scenario(), 2, {7, 11});
        double prev = -1.0;
        for (double snr : {0.5, 1.0, 4.0, 100.0, 1000.0}) {
            double c = shannon_capacity(F, snr);
            CHECK(c > prev);
            prev = c;
        }
    }
    SUBCASE("better-conditioned channels carry more at fixed power") {
        double prev = -1.0;
        for (double s : {0.2, 0.6, 1.0}) {
            arma::mat re{{std::sqrt(2.0 - s * s), 0.0}, {0.0, s}};
            double c = shannon_capacity(
                measured(arma::cx_mat(re, arma::mat(2, 2, arma::fill::zeros))), 100.0);
            CHECK(c > prev);
            prev = c;
        }
    }
}

TEST_CASE("singular values and condition number") {
    ChannelMatrix eye = measured(
        arma::cx_mat(arma::mat{{1.0, 0.0}, {0.0, 1.0}}, arma::mat(2, 2, arma::fill::zeros)));
    arma::vec sv = singular_values(eye);
    REQUIRE(sv.n_elem == 2);
    CHECK(sv(0) == 1.0);
    CHECK(sv(1) == 1.0);
    CHECK(condition_number(eye) == 1.0);

    ChannelMatrix diag = measured(
        arma::cx_mat(arma::mat{{2.0, 0.0}, {0.0, 1.0}}, arma::mat(2, 2, arma::fill::zeros)));
    sv = singular_values(diag);
    CHECK(sv(0) == 2.0);
    CHECK(sv(1) == 1.0);
    CHECK(condition_number(diag) == 4.0);  // squared ratio

    ChannelMatrix flat = measured(
        arma::cx_mat(arma::mat{{1.0, 1.0}, {1.0, 1.0}}, arma::mat(2, 2, arma::fill::zeros)));
    CHECK(std::isinf(condition_number(flat)));

    ChannelMatrix huge = measured(arma::cx_mat(arma::mat{{1.0e10, 0.0}, {0.0, 1.0}},
                                               arma::mat(2, 2, arma::fill::zeros)));
    CHECK(std::isinf(condition_number(huge)));  // ratio beyond 1e18

    CHECK(numerically_singular(1.0e10));
    CHECK(numerically_singular(52455225147276.484));
    CHECK_FALSE(numerically_singular(9.9e9));
    CHECK_FALSE(numerically_singular(6.2851857956878465));

    SUBCASE("Frobenius energy equals the sum of squared singular values") {
        arma::cx_mat m{{cplx(1.0, 0.2), cplx(0.1, -0.7), cplx(0.0, 0.3)},
                       {cplx(0.4, 0.0), cplx(-1.0, 0.1), cplx(0.2, 0.1)},
                       {cplx(0.0, 0.1), cplx(0.3, -0.2), cplx(0.9, 0.5)}};
        arma::vec v = singular_values(measured(m));
        REQUIRE(v.n_elem == 3);
        CHECK(v(0) >= v(1));
        CHECK(v(1) >= v(2));
        double fro2 = std::pow(arma::norm(m, "fro"), 2);
        CHECK(arma::dot(v, v) == doctest::Approx(fro2).epsilon(1e-9));
    }
}

TEST_CASE("condition number is invariant under a unitary mix") {
    ChannelMatrix H = measured(arma::cx_mat{{cplx(0.9, 0.1), cplx(0.2, -0.4)},
                                            {cplx(-0.3, 0.5), cplx(1.2, 0.0)}});
    arma::cx_mat U{{cplx(1.0, 0.0), cplx(1.0, 0.0)}, {cplx(1.0, 0.0), cplx(-1.0, 0.0)}};
    U /= std::sqrt(2.0);
    ChannelMatrix mixed = measured(U * H.entries);
    CHECK(condition_number(mixed) ==
          doctest::Approx(condition_number(H)).epsilon(1e-6));
}

TEST_CASE("covariance is the Hermitian outer product") {
    arma::cx_mat m{{cplx(1.0, 0.2), cplx(0.1, -0.7)}, {cplx(0.4, 0.0), cplx(-1.0, 0.1)}};
    ChannelMatrix H = measured(m);
    arma::cx_mat R = covariance(H);
    REQUIRE(R.n_rows == 2);
    CHECK(arma::norm(arma::cx_mat(R - m * m.t()), "fro") < 1e-14);
    CHECK(std::abs(R(0, 1) - std::conj(R(1, 0))) < 1e-14);
    double trace = R(0, 0).real() + R(1, 1).real();
    CHECK(trace == doctest::Approx(std::pow(arma::norm(m, "fro"), 2)).epsilon(1e-12));
}

TEST_CASE("measured-channel JSON round trip") {
    arma::cx_mat m{{cplx(1.0e-4, -2.5e-4), cplx(0.0, 3.0e-5)},
                   {cplx(-7.0e-5, 0.0), cplx(1.25e-4, 1.0e-4)}};
    ChannelMatrix H = measured(m);
    H.frequency = 9.7e9;
    std::string text = channel_to_json(H);
    ChannelMatrix back = channel_from_json(text);
    CHECK(back.provenance == ChannelProvenance::Measured);
    CHECK(back.frequency == H.frequency);
    REQUIRE(back.entries.n_rows == 2);
    REQUIRE(back.entries.n_cols == 2);
    for (arma::uword i = 0; i < 2; ++i)
        for (arma::uword j = 0; j < 2; ++j)
            CHECK(back.entries(i, j) == m(i, j));

    CHECK_THROWS_AS(channel_from_json("not json at all"), ParseError);
    CHECK_THROWS_AS(channel_from_json(R"({"n":2,"m":2,"frequency_hz":1e10,)"
                                      R"("entries":[[1.0,0.0]]})"),
                    ValidationError);
    CHECK_THROWS_AS(channel_from_json(R"({"n":2,"m":2})"), ParseError);
}

}  // TEST_SUITE
