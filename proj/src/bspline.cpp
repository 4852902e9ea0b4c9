#include "rsb/bspline.hpp"

#include <array>
#include <cmath>

#include "quadrature.hpp"
#include <vector>

#include "rsb/grid.hpp"

namespace rsb {

namespace {

// N[q] = B_m(x - j), j = floor(x) - m + 1 + q
std::array<double, 33> bspline_row(int m, double x) {
    int i = static_cast<int>(std::floor(x));
    // N[q] = N_{i-k+1+q, k} on integer knots, raised one order per pass
    std::array<double, 33> N{};
    N[0] = 1.0;
    for (int k = 2; k <= m; ++k) {
        for (int q = k - 1; q >= 0; --q) {
            int j = i - k + 1 + q;
            double left = (q >= 1) ? N[static_cast<std::size_t>(q - 1)] : 0.0;   // N_{j,k-1}
            double right = (q <= k - 2) ? N[static_cast<std::size_t>(q)] : 0.0;  // N_{j+1,k-1}
            N[static_cast<std::size_t>(q)] = ((x - j) * left + (j + k - x) * right) / (k - 1);
        }
    }
    return N;
}

double bspline_raw(int m, double x) {
    if (m <= 0 || x < 0.0 || x >= m) return 0.0;
    require(m <= 32, "bspline: order too large");
    int q = m - 1 - static_cast<int>(std::floor(x));  // N_{0,m}
    return (q >= 0 && q < m) ? bspline_row(m, x)[static_cast<std::size_t>(q)] : 0.0;
}

}  // namespace

double bspline(int m, double x) {
    // symmetric about m/2; evaluate on the left half to keep the recursion short of cancellation
    if (x > 0.5 * m) x = m - x;
    return bspline_raw(m, x);
}

double bspline_deriv(int m, int j, double x) {
    if (j == 0) return bspline(m, x);
    if (j >= m) return 0.0;
    if (x < 0.0 || x >= m) return 0.0;
    // all shifts B_{m-j}(x - i) come out of one recursion
    const int k = m - j;
    auto N = bspline_row(k, x);
    int fl = static_cast<int>(std::floor(x));
    double acc = 0;
    for (int i = 0; i <= j; ++i) {
        int q = i - fl + k - 1;
        if (q < 0 || q >= k) continue;
        acc += ((i % 2) ? -1.0 : 1.0) * binomial(j, i) * N[static_cast<std::size_t>(q)];
    }
    return acc;
}

double bspline_integral(int m, double x) {
    if (x <= 0) return 0.0;
    if (x >= m) return 1.0;
    if (x > 0.5 * m) return 1.0 - bspline_integral(m, m - x);
    double acc = 0;
    for (int i = 0; i <= static_cast<int>(std::floor(x)); ++i) acc += bspline(m + 1, x - i);
    return acc;
}

double CenteredBump::deriv(int j, double t) const {
    double h = 0.5 * m;
    return std::pow(h, j + 1) * bspline_deriv(m, j, h * (t + 1.0));
}

double CenteredBump::integral(double t) const { return bspline_integral(m, 0.5 * m * (t + 1.0)); }

double CenteredBump::moment(int k) const {
    if (k % 2) return 0.0;
    return piecewise_integral([&](double t) { return std::pow(t, k) * value(t); }, -1.0, 1.0, m);
}

double SmoothStep::deriv(int j, double v) const {
    if (v <= 0.0) return j == 0 ? 1.0 : 0.0;
    if (v >= 1.0) return 0.0;
    if (j == 0) return 1.0 - bspline_integral(m, m * v);
    return -std::pow(static_cast<double>(m), j) * bspline_deriv(m, j - 1, m * v);
}

}  // namespace rsb
