#pragma once

#include <functional>
#include <vector>

#include "rsb/grid.hpp"
#include "rsb/pyramid.hpp"
#include "rsb/wavelet.hpp"

namespace rsb {

// Quadrature weights for pairing a V_N distribution with smooth test
// functions: <xi, g> ~ sum_y v(y) g(y), y in Lambda_M, M = N + L.
// Exact for g polynomial of degree < wavelet order on each phi^M support.
class DualSamples {
public:
    DualSamples(const std::vector<double>& coeffs, const Scaling& s, int N, const Wavelet& w, int oversample = 3);
    DualSamples(const Pyramid& p, const Wavelet& w, int oversample = 3);

    int level() const { return M_; }
    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return v_; }

    // x -> <xi, K(. - x)> for x in Lambda_M, K periodized on Lambda_M
    std::vector<double> correlate(const std::vector<double>& kernel) const;
    // x -> <xi, K(x - .)>
    std::vector<double> convolve(const std::vector<double>& kernel) const;

private:
    Grid grid_;
    int M_;
    std::vector<double> v_;
};

// values on Lambda_M -> their restriction to the subgrid Lambda_n
std::vector<double> restrict_to_level(const std::vector<double>& fine, const Scaling& s, int M, int n);

// int (z - x)^k phi^n_x(z) dz (independent of x); psi-variant for detail index psi
double father_monomial_pairing(const Wavelet& w, const Scaling& s, int n, const MultiIndex& k);
double mother_monomial_pairing(const Wavelet& w, const Scaling& s, int n, int psi, const MultiIndex& k);

// V_M coefficients of K * xi for xi in V_M, via the interpolating
// autocorrelation of phi: (K * xi)_x ~ sum_y c_y K((x - y)) 2^{-M|s|}
std::vector<double> convolve_coefficients(const std::vector<double>& coeffs, const std::vector<double>& kernel,
                                          const Grid& grid);

// V_N coefficients <F, phi^N_x> of a smooth periodic F by the rule
// 2^{-N|s|/2} sum_t phi(t) F(x + t 2^{-Ns}), exact for polynomials of degree < order
std::vector<double> project_smooth(const Scaling& s, int N, const Wavelet& w, const std::function<double(const Point&)>& F);

}  // namespace rsb
