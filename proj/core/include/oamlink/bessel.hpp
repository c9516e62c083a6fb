#pragma once

#include <vector>

namespace oamlink {

// J_n(x) for integer order n (any sign) and real x. Evaluated with a
// normalized downward recurrence, so a whole order range costs one sweep
// and results do not depend on the platform's libm special functions.
double bessel_j(int order, double x);

// J_0(x) .. J_nmax(x) in one pass; nmax >= 0, any real x.
std::vector<double> bessel_j_range(int nmax, double x);

// J_lo(x) .. J_hi(x) for a signed order window, lo <= hi.
std::vector<double> bessel_j_orders(int lo, int hi, double x);

}  // namespace oamlink
