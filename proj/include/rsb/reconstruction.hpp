#pragma once

#include <iosfwd>
#include <vector>

#include "rsb/besov.hpp"
#include "rsb/modelled.hpp"

namespace rsb {

// A^n_x on Lambda_n, n = 0..N
struct Germ {
    Scaling scaling;
    std::vector<std::vector<double>> A;
    int finest() const { return static_cast<int>(A.size()) - 1; }
};

struct SewingCertificate {
    double alpha = 0, gamma = 0;
    std::vector<double> germ;       // ||A^n / 2^{-n alpha - n|s|/2}||_{l^p_n}
    std::vector<double> increment;  // ||dA^n / 2^{-n gamma - n|s|/2}||_{l^p_n}, n < N
    double germ_sup = 0;
    double increment_lq = 0;
    double increment_growth = 0;  // fitted log2 slope of the increment table over the last levels
    std::vector<double> g_norm;   // ||g_n||_{L^2}, V_n part of xi_{n+1} - xi_n
    std::vector<double> dxi_norm; // ||dxi_n||_{L^2}, V_n^perp part

    void write_csv(std::ostream& os) const;
};

// <xi_{n+1}, phi^n_x> - A^n_x
std::vector<double> germ_increment(const Germ& g, int n, const Wavelet& w);

struct SewingResult {
    Pyramid xi;
    SewingCertificate cert;
};

// xi_N assembled from xi_0 plus the g_n and dxi_n splits; throws CertificateError
// when the increment table grows faster than 2^{max_growth n}
SewingResult sewing_limit(const Germ& g, const Wavelet& w, double alpha, double gamma, double p, double q,
                          double max_growth = 0.1);

// random germ with detail content 2^{-n(alpha + |s|/2)} and increments 2^{-n(gamma + |s|/2)}
Germ random_germ(const Scaling& s, int N, const Wavelet& w, double alpha, double gamma, std::uint64_t seed,
                 double increment_scale = 1.0);
// A^n_x = <xi, phi^n_x>
Germ consistent_germ(const Pyramid& xi, const Wavelet& w);

struct ReconstructionResult {
    Pyramid xi;
    SewingCertificate cert;
    double alpha_target = 0;  // min(A \ N) ^ gamma
    double alpha_bar = 0;     // alpha_target when q = inf, else the measured exponent (asserted < alpha_target)
    double measured_alpha = 0;
};

// germ A^n_x = <Pi_x fbar^(n)(x), phi^n_x>
Germ reconstruction_germ(const AveragedMD& fb, const Model& M);
ReconstructionResult reconstruct(const ModelledDistribution& f, const Model& M, double p, double q);

struct BoundTable {
    std::vector<double> level;  // per m (lambda = 2^{-m}): ||sup_eta |<...>| / lambda^gamma||_{L^p}
    double aggregate = 0;       // l^q over m
    double budget = 0;          // |||f||| ||Pi|| (1 + ||Gamma||)
    double ratio = 0;           // aggregate / budget

    void write_csv(std::ostream& os) const;
};

// levels m = 0..N - 1 - margin
BoundTable reconstruction_bound(const ModelledDistribution& f, const Model& M, const Pyramid& xi, double p, double q,
                                const Dictionary& dict, int margin = 2);

struct TwoModelTable {
    std::vector<double> level;
    double aggregate = 0;
    double budget = 0;
    double md = 0;        // |||f; f'|||
    double dnorm_g = 0;   // |||f'|||
    ModelNorms A, B, diff;
};

TwoModelTable two_model_compare(const ModelledDistribution& f, const Model& M, const ModelledDistribution& g,
                                const Model& Mg, double p, double q, const Dictionary& dict, int margin = 2);

struct DerivativeReport {
    std::vector<MultiIndex> k;
    std::vector<double> rel_error;
    double max_error() const;
};

// k! f_k against central differences of xi mollified by rho at scale 2^{-N+2}
DerivativeReport derivative_check(const ModelledDistribution& f, const Model& M, const Pyramid& xi);

// P^q_{k,x}(rho^n, .) and its y-derivatives, x = 0: d^j_y P at u
double lift_kernel(const TestProfile& rho, const Scaling& s, int q, const MultiIndex& k, int n, const MultiIndex& j,
                   const Point& u);

struct LiftResult {
    ModelledDistribution f;
    AveragedMD fbar;
    Pyramid reconstructed;
    double roundtrip = 0;  // ||R iota xi - xi||_{L^p} / ||xi||_{L^p}
    UnaverageResult convergence;
};

// M must be the polynomial model at xi's resolution. The level-N kernels are
// only 2^-N wide, so they are sampled `oversample` levels finer than N
// (0: up to 7 levels, capped at 2^24 samples, never below M.oversample()).
LiftResult lift(const Pyramid& xi, const Model& M, double gamma, double p = 2.0, double q = kInf, int oversample = 0);

struct UniquenessReport {
    std::vector<double> level;  // sup_x |<xi1 - xi2, rho^delta_x>|, delta = 2^{-j}
    double ratio = 0;           // max_delta level / delta^gamma
    bool flagged = false;
};

UniquenessReport uniqueness_probe(const Pyramid& a, const Pyramid& b, const Wavelet& w, double gamma,
                                  double threshold = 10.0);

// ||xi - F||_{L^2} with F projected at level N + extra
double l2_distance_to_function(const Pyramid& xi, const Wavelet& w, const std::function<double(const Point&)>& F,
                               int extra = 6);
// L^p norm of the V_N function given by a pyramid, via point values on Lambda_{N+L}
double lp_norm_pyramid(const Pyramid& xi, const Wavelet& w, double p, int oversample = 3);

}  // namespace rsb
