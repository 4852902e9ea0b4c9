#pragma once

#include <boost/math/quadrature/gauss.hpp>

namespace rsb {

// Gauss-Legendre (16 nodes) on `pieces` equal subintervals; exact for
// piecewise polynomials of degree < 32 with breakpoints on the subdivision
template <class F>
double piecewise_integral(F&& f, double a, double b, int pieces) {
    double acc = 0, w = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) {
        double lo = a + i * w, hi = lo + w;
        acc += boost::math::quadrature::gauss<double, 16>::integrate(f, lo, hi);
    }
    return acc;
}

}  // namespace rsb
