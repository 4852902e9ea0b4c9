#pragma once

#include <vector>

#include "rsb/grid.hpp"

namespace rsb {

// Daubechies orthonormal family with `order` vanishing moments (2*order taps).
// Refinement: phi(x) = sqrt2 * sum_k h_k phi(2x - k), so sum h_k = sqrt2.
class Wavelet {
public:
    static Wavelet build(int order, int r, int cascade_levels = 10);
    // smallest order whose vanishing moments exceed r and whose Hoelder
    // exponent reaches r
    static int minimal_order(int r);
    static double holder_exponent(int order);

    int order() const { return order_; }
    int r() const { return r_; }
    int taps() const { return 2 * order_; }
    double support() const { return 2.0 * order_ - 1.0; }
    int cascade_levels() const { return R_; }

    const std::vector<double>& lowpass() const { return h_; }
    const std::vector<double>& highpass() const { return g_; }
    // phi(t), t = 0..taps-1
    const std::vector<double>& father_at_integers() const { return phi_int_; }
    // phi and psi on the mesh 2^{-R} over [0, support]
    const std::vector<double>& father_table() const { return phi_tab_; }
    const std::vector<double>& mother_table() const { return psi_tab_; }

    double father(double u) const { return lookup(phi_tab_, u); }
    double mother(double u) const { return lookup(psi_tab_, u); }

    // 1-d local basis of one anisotropic step of s binary levels:
    // e = 0 father, e = 2^j + m -> 2^{j/2} psi(2^j u - m)
    double local(int e, double u) const;
    // support [lo, hi] of local(e, .)
    void local_support(int e, double& lo, double& hi) const;
    // int u^m phi(u) du (exact recursion from the filter)
    double father_moment(int m) const;
    double mother_moment(int m) const;
    double local_moment(int e, int m) const;

private:
    double lookup(const std::vector<double>& tab, double u) const;

    int order_ = 0;
    int r_ = 0;
    int R_ = 0;
    std::vector<double> h_, g_, phi_int_, phi_tab_, psi_tab_, mu_, nu_;
};

}  // namespace rsb
