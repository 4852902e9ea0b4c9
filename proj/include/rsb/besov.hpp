#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "rsb/pyramid.hpp"
#include "rsb/testfn.hpp"

namespace rsb {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// (sum_x 2^{-n|s|} |u(x)|^p)^{1/p}, sup when p = inf
double lpn_norm(const std::vector<double>& u, const Scaling& s, int n, double p);
// ell^q over a finite sequence
double lq_norm(const std::vector<double>& v, double q);

struct BesovParams {
    double alpha = 0;
    double p = 2;
    double q = kInf;
};
void check_params(const BesovParams& b);

struct BesovReport {
    double value = 0;
    double base = 0;                         // ||b^0||_{l^p_0}
    std::vector<std::vector<double>> table;  // [n][psi], weighted l^p_n norms
    std::vector<double> level_sup;           // sup_psi table[n]
};

BesovReport besov_norm_wavelet(const Pyramid& xi, const BesovParams& b);

// t_n = sup_psi ||a^{n,psi} / 2^{-n|s|/2}||_{l^p_n}; the wavelet norm at q = inf
// is finite iff 2^{n alpha} t_n stays bounded
std::vector<double> unweighted_levels(const Pyramid& xi, double p);
// -slope of log2 t_n over levels [from, N)
double critical_exponent(const Pyramid& xi, double p, int from);

struct TestfnReport {
    double value = 0;
    double first = 0;           // lambda-free term, alpha >= 0 only
    std::vector<double> level;  // per dyadic lambda = 2^{-n}
};

TestfnReport besov_norm_testfn(const Pyramid& xi, const BesovParams& b, const Dictionary& dict, const Wavelet& w,
                               int oversample = 3);

struct MollifyResult {
    std::vector<double> values;  // on Lambda_N
    bool hypothesis_ok = true;   // alpha > 0
};
MollifyResult mollify(const Pyramid& xi, int m, const Wavelet& w, double alpha, int oversample = 3);

Pyramid synthesize_dirac(const Scaling& s, int N, const Wavelet& w, const Point& x0);
Pyramid synthesize_smooth(const Scaling& s, int N, const Wavelet& w, const std::function<double(const Point&)>& F);
Pyramid synthesize_random_besov(const Scaling& s, int N, double alpha, std::uint64_t seed);

}  // namespace rsb
