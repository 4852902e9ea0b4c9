#pragma once

#include <vector>

namespace rsb {

// cardinal B-spline of order m on [0, m] and its derivatives (piecewise, j < m)
double bspline(int m, double x);
double bspline_deriv(int m, int j, double x);
// int_0^x B_m
double bspline_integral(int m, double x);

// centred bump on [-1, 1]: b(t) = (m/2) B_m(m (t + 1) / 2), integral 1
struct CenteredBump {
    int m = 12;
    double value(double t) const { return deriv(0, t); }
    double deriv(int j, double t) const;
    // int_{-1}^{t} b
    double integral(double t) const;
    // int t^k b(t) dt, exact
    double moment(int k) const;
};

// smooth step: 1 on (-inf, 0], 0 on [1, inf)
struct SmoothStep {
    int m = 12;
    double deriv(int j, double v) const;
};

}  // namespace rsb
