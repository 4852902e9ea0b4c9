#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rsb/grid.hpp"

namespace rsb {

// fixed-order pairwise summation, so reductions are reproducible bit for bit
double pairwise_sum(const std::vector<double>& v);
double pairwise_sum(const double* v, std::size_t n);

// least squares y = a + b x; returns b
double slope_fit(const std::vector<double>& x, const std::vector<double>& y);

// inf encoded as +infinity
bool is_inf(double p);
// (sum w |u|^p)^{1/p} with uniform weight w, or max when p = inf
double weighted_pnorm(const std::vector<double>& u, double weight, double p);

// periodic circular convolution on the box extents[0..d), row-major;
// out[x] = sum_y a[y] b[x - y]
std::vector<double> circular_convolve(const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<std::int64_t>& extents);
// out[x] = sum_y a[y] b[y - x]
std::vector<double> circular_correlate(const std::vector<double>& a, const std::vector<double>& b,
                                       const std::vector<std::int64_t>& extents);

// d^k of a periodic table on the box extents[0..d) with side lengths `period`,
// by multiplying the spectrum with (i omega)^k; Nyquist modes dropped for odd orders
std::vector<double> spectral_derivative(const std::vector<double>& a, const std::vector<std::int64_t>& extents,
                                        const std::vector<double>& period, const MultiIndex& k);

inline const char* kRngId = "mt19937_64/u53";

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    // uniform [0,1) from the top 53 bits
    double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
    double symmetric() { return 2.0 * uniform() - 1.0; }

private:
    std::mt19937_64 g_;
};

}  // namespace rsb
