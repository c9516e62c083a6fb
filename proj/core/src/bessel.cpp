#include "oamlink/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oamlink {
namespace {

// Power series for small |x|: J_n(x) = (x/2)^n / n! * sum_k (-(x/2)^2/ (k (k+n)))...
// Only used where the leading term already dominates, so a few terms suffice.
double series_small_x(int n, double x) {
    double half = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / i;
    double sum = term;
    double m = -half * half;
    for (int k = 1; k <= 12; ++k) {
        term *= m / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

std::vector<double> bessel_j_range(int nmax, double x) {
    // Negative argument handled by parity at the end.
    double ax = std::abs(x);
    std::vector<double> out(static_cast<size_t>(nmax) + 1, 0.0);

    if (ax < 1e-8) {
        for (int n = 0; n <= nmax; ++n) out[n] = series_small_x(n, ax);
    } else {
        // Miller's algorithm: start the two-term recurrence high enough above
        // both the order range and the turning point x, run it downward, then
        // normalize with  J0 + 2*sum J_{2k} = 1.
        double top = std::max(static_cast<double>(nmax), ax);
        int start = static_cast<int>(top + 16.0 * std::cbrt(top) + 24.0);
        if (start % 2 == 1) ++start;

        double jp = 0.0;                                    // J_{k+1}
        double jc = std::numeric_limits<double>::min() * 1e40;  // J_k seed
        double sum = 0.0;                                   // normalization accumulator
        const double rescale = 1e280;
        for (int k = start; k >= 1; --k) {
            double jm = (2.0 * k / ax) * jc - jp;           // J_{k-1}
            jp = jc;
            jc = jm;
            if (k - 1 <= nmax) out[k - 1] = jc;
            if ((k - 1) % 2 == 0 && k - 1 > 0) sum += 2.0 * jc;
            if (std::abs(jc) > rescale) {
                jc /= rescale;
                jp /= rescale;
                sum /= rescale;
                for (auto& v : out) v /= rescale;
            }
        }
        sum += jc;  // the k=0 term enters once
        for (auto& v : out) v /= sum;
    }

    if (x < 0.0) {
        for (int n = 1; n <= nmax; n += 2) out[n] = -out[n];
    }
    return out;
}

std::vector<double> bessel_j_orders(int lo, int hi, double x) {
    int nmax = std::max(std::abs(lo), std::abs(hi));
    std::vector<double> base = bessel_j_range(nmax, x);
    std::vector<double> out(static_cast<size_t>(hi - lo) + 1);
    for (int n = lo; n <= hi; ++n) {
        int a = std::abs(n);
        double v = base[a];
        // J_{-n}(x) = (-1)^n J_n(x)
        if (n < 0 && a % 2 == 1) v = -v;
        out[n - lo] = v;
    }
    return out;
}

double bessel_j(int order, double x) {
    int n = std::abs(order);
    double v = bessel_j_range(n, x)[n];
    if (order < 0 && n % 2 == 1) v = -v;
    return v;
}

}  // namespace oamlink
