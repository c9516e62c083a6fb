#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace oamlink {

// SplitMix64 step; the standard finalizer, used to whiten seed material.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-(stream,index) seed so trials are independent yet
// reproducible and safe to run in any order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t index) {
    std::uint64_t s = base;
    std::uint64_t z = splitmix64(s);
    s = z ^ (stream * 0xbf58476d1ce4e5b9ULL + 0x9e3779b97f4a7c15ULL);
    z = splitmix64(s);
    s = z ^ (index * 0x94d049bb133111ebULL + 0xda942042e4dd58b5ULL);
    return splitmix64(s);
}

// mt19937_64 with hand-rolled uniform and Box-Muller transforms, so streams
// are bit-identical across standard libraries (std distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

    int bit() { return static_cast<int>(eng_() >> 63); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> complex_gaussian(double variance) {
        double s = std::sqrt(variance / 2.0);
        return {gaussian() * s, gaussian() * s};
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace oamlink
