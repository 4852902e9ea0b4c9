#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rsb/modelled.hpp"
#include "rsb/reconstruction.hpp"

namespace rsb {

enum class KernelKind { Heat, Riesz, Custom };

// P = sum_{n >= 0} P_n + P_-, P_n(x) = 2^{n(|s| - beta)} P_0(2^{ns} x).
// P_0 = P chi - (R - 2^{|s| - beta} R(2^s .)) with chi a smooth annulus and R a
// combination of derivatives of a bump chosen so that P_0 kills polynomials
// of scaled degree <= r. Then sum_{n<N} P_n = P theta - R wherever ||x||_s >= 2^-N.
class KernelDecomposition {
public:
    // heat: s = (2, 1, ..., 1), beta = 2. riesz: N(x)^{beta - |s|}.
    static KernelDecomposition heat(int d, int r, int resolution = 0);
    static KernelDecomposition riesz(const Scaling& s, double beta, int r, int resolution = 0);
    // rejected when the measured scaling defect exceeds tol
    static KernelDecomposition custom(const Scaling& s, double beta, int r, std::function<double(const Point&)> P,
                                      int resolution = 0, double tol = 1e-9);

    KernelKind kind() const { return kind_; }
    const Scaling& scaling() const { return s_; }
    double beta() const { return beta_; }
    int r() const { return r_; }
    // P_0 is tabulated on [-1, 1)^d at spacing 2^{-resolution s_i}
    int resolution() const { return R_; }

    double kernel(const Point& x) const { return P_(x); }
    // smooth s-homogeneous norm, >= ||x||_s
    double smooth_norm(const Point& x) const;
    double cutoff(const Point& x) const;  // theta(N(x)), 1 near 0, 0 outside B(0,1)
    double corrector(const Point& x) const;  // R
    double p0(const Point& x) const;
    double level_value(int n, const Point& x) const;  // P_n(x) from p0
    const std::vector<MultiIndex>& corrector_indices() const { return ck_; }
    const std::vector<double>& corrector_coefficients() const { return cc_; }

    // d^k P_0 on the table nodes (spectral, cached)
    const std::vector<double>& table(const MultiIndex& k) const;
    std::vector<std::int64_t> table_extents() const;
    // sum_{n0 <= n < n1} d^k P_n sampled on grid and periodized; needs grid.level() <= resolution()
    std::vector<double> sample_plus(const Grid& grid, const MultiIndex& k, int n0, int n1) const;

    void write_profile(std::ostream& os) const;

private:
    KernelDecomposition() = default;
    void build();

    KernelKind kind_ = KernelKind::Riesz;
    Scaling s_;
    double beta_ = 0;
    int r_ = 0, R_ = 0, L_ = 1;
    std::function<double(const Point&)> P_;
    std::vector<MultiIndex> ck_;
    std::vector<double> cc_;
    struct Cache {
        std::mutex mu;
        std::map<MultiIndex, std::vector<double>> tab;
    };
    std::shared_ptr<Cache> cache_;
};

struct KernelProfile {
    int d = 0;
    std::vector<int> s;
    double beta = 0;
    int r = 0, resolution = 0;
    std::vector<double> values;
};
KernelProfile read_profile(std::istream& is);

// V_N coefficients <F, phi^N_x> from samples of F on Lambda_M, M >= N
std::vector<double> coefficients_from_samples(const std::vector<double>& F, const Scaling& s, int M, int N,
                                              const Wavelet& w);

// d^k P_+ * xi with P_+ = sum_{n<N} P_n, as values on Lambda_N or as a pyramid.
// The pairing runs on Lambda_{N+L}. P_{N-1} is only 2^{1-N} wide and its
// corrector bumps half that, so L = 3 leaves ~10% errors in d^2 P_+;
// oversample 0 picks plus_oversample (5 levels, less if the grid gets too big).
int plus_oversample(const Scaling& s, int N, const KernelDecomposition& K);
std::vector<double> convolve_plus_values(const Pyramid& xi, const Wavelet& w, const KernelDecomposition& K,
                                         const MultiIndex& k = {}, int oversample = 0);
Pyramid convolve_plus(const Pyramid& xi, const Wavelet& w, const KernelDecomposition& K, int oversample = 0);

// I[sigma * size + tau] = 1 iff sigma = I(tau)
struct IntegrationMap {
    int size = 0;
    std::vector<double> matrix;
    std::vector<int> image;  // per symbol: index of I(tau) or -1
};

struct ExtendedModel {
    Model model;
    IntegrationMap I;
    std::vector<int> base;  // base symbol index -> extended index
    double gamma = 0;       // the base gamma the extension was built for
    double beta = 0;        // and the kernel order
};

// adds I(tau) for every abstract tau with |tau| < gamma and the polynomials
// below gamma + beta; Pi_x I(tau) = P_+ * Pi_x tau - Taylor part at x
ExtendedModel extend_structure(const Model& M, const KernelDecomposition& K, double gamma, int oversample = 0);

struct SchauderResult {
    ModelledDistribution f;  // on the extended model, order gamma + beta
    DNormReport norm;
};

// P^gamma_+ f; Rf is the reconstruction of f (reused)
SchauderResult schauder_apply(const ModelledDistribution& f, const Model& M, const ExtendedModel& E,
                              const KernelDecomposition& K, const Pyramid& Rf, double p = 2.0, double q = kInf,
                              int oversample = 0);

struct IdentityReport {
    double rel_error = 0;         // ||R P f - P_+ * Rf||_{L^p} / ||P_+ * Rf||_{L^p}
    std::vector<double> level;    // per n: l2 norm of the detail difference
    double direct_norm = 0;
    void write_csv(std::ostream& os) const;
};

IdentityReport convolution_identity_check(const ModelledDistribution& f, const Model& M, const ExtendedModel& E,
                                          const KernelDecomposition& K, double p = 2.0, double q = kInf,
                                          int oversample = 0);

}  // namespace rsb
