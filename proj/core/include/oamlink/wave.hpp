#pragma once

#include <cmath>
#include <numbers>

#include "oamlink/errors.hpp"

namespace oamlink {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct WaveParameters {
    double frequency;   // Hz
    double wavelength;  // vacuum wavelength, m
    double wavenumber;  // rad/m

    static WaveParameters from_frequency(double frequency_hz) {
        if (!(frequency_hz > 0.0))
            throw InvalidGeometry("frequency must be positive");
        double lam = kSpeedOfLight / frequency_hz;
        return {frequency_hz, lam, 2.0 * std::numbers::pi / lam};
    }
};

struct WaveguideSpec {
    double wide_side;    // s_w, m
    double narrow_side;  // s_n, m
};

// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(x) / x;
}

// Wavelength of the traveling wave inside the arc guide. Above-cutoff
// operation (lambda0 < 2 s_w) is required; the result always exceeds the
// vacuum wavelength.
inline double cutoff_wavelength(const WaveguideSpec& wg, const WaveParameters& wave) {
    double ratio = wave.wavelength / (2.0 * wg.wide_side);
    if (ratio >= 1.0)
        throw EvanescentMode("lambda0 >= 2*s_w: TE10 cannot propagate");
    return wave.wavelength / std::sqrt(1.0 - ratio * ratio);
}

// Arc radius that makes the guide's traveling current wind |le| times per
// revolution, i.e. synthesize equivalent mode le.
inline double radius_for_mode(int le, const WaveParameters& wave, const WaveguideSpec& wg) {
    if (le == 0)
        throw NonPhysicalRadius("equivalent mode 0 has no arc radius");
    double ratio = wave.wavelength / (2.0 * wg.wide_side);
    if (ratio >= 1.0)
        throw EvanescentMode("lambda0 >= 2*s_w: TE10 cannot propagate");
    double inv = std::sqrt((2.0 / wave.wavelength) * (2.0 / wave.wavelength)
                           - (1.0 / wg.wide_side) * (1.0 / wg.wide_side));
    double r = std::abs(le) / (std::numbers::pi * inv) - wg.wide_side / 2.0;
    if (!(r > 0.0))
        throw NonPhysicalRadius("mode magnitude too small for this waveguide");
    return r;
}

}  // namespace oamlink
