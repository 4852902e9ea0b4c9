#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "rsb/pairing.hpp"
#include "rsb/pyramid.hpp"
#include "rsb/structure.hpp"
#include "rsb/testfn.hpp"

namespace rsb {

// Pi_x tau = D_tau - sum_m t_m(x)/m! (. - x)^m for an abstract tau;
// t_m tabulated on Lambda_N
struct TaylorTable {
    MultiIndex m{};
    std::vector<double> t;
};

struct AbstractData {
    Pyramid D;
    std::vector<std::vector<double>> level;  // V_n coefficients of D, n = 0..N
    std::vector<TaylorTable> taylor;
    std::shared_ptr<const DualSamples> dual;
};

// additive change of one Gamma entry: coefficient of `out` in Gamma_{x,y} `in`
// gains eps * e(x - y)
struct GammaPerturbation {
    int out = 0, in = 0;
    double eps = 0;
    std::function<double(const Point&)> e;
};

class Model {
public:
    Model(Structure st, std::shared_ptr<const Wavelet> w, int N, int oversample = 3);

    static Model polynomial(const Scaling& s, double gamma, std::shared_ptr<const Wavelet> w, int N);
    // Pi_x Xi = xi, Gamma fixes Xi
    static Model noise(double alpha, const Pyramid& xi, double gamma, std::shared_ptr<const Wavelet> w);

    void set_abstract(int tau, const Pyramid& D, std::vector<TaylorTable> taylor = {});
    // same model with every noise symbol realized by xi
    Model with_noise(const Pyramid& xi) const;
    Model with_gamma_perturbation(const GammaPerturbation& g) const;

    const Structure& structure() const { return st_; }
    const Wavelet& wavelet() const { return *w_; }
    std::shared_ptr<const Wavelet> wavelet_ptr() const { return w_; }
    int levels() const { return N_; }
    int oversample() const { return L_; }
    const Grid& grid() const { return grid_; }
    int size() const { return st_.size(); }
    bool has_abstract(int tau) const { return static_cast<bool>(abs_[static_cast<std::size_t>(tau)]); }
    const AbstractData& abstract(int tau) const;
    const std::vector<GammaPerturbation>& perturbations() const { return pert_; }

    // x, y lifted Lambda_N indices; G[sigma * size + tau] = coefficient of sigma in Gamma tau
    void gamma(const Index& x, const Index& y, std::vector<double>& G) const;
    void apply_gamma(const Index& x, const Index& y, const double* in, double* out) const;

    // <Pi_x tau, phi^n_x>, <Pi_x tau, psi^n_x> for all x in Lambda_n
    std::vector<double> father_pairing(int tau, int n) const;
    std::vector<double> mother_pairing(int tau, int n, int psi) const;
    // <Pi_x tau, eta^lambda_x>, lambda = 2^{-m}, for all x in Lambda_N
    std::vector<double> test_pairing(int tau, const TestProfile& eta, int m) const;
    // polynomial part of Pi_x tau at z (the D part excluded)
    double polynomial_part(int tau, const Index& x, const Point& z) const;

    Point coords(const Index& k) const { return grid_.point(k); }

private:
    struct PolyEntry {
        int out, in;
        double c;
        MultiIndex e;
    };

    Structure st_;
    std::shared_ptr<const Wavelet> w_;
    int N_, L_;
    Grid grid_;
    std::vector<std::shared_ptr<const AbstractData>> abs_;
    std::vector<GammaPerturbation> pert_;
    std::vector<PolyEntry> poly_;
    int maxdeg_ = 0;
};

struct ModelNorms {
    double pi = 0;
    double gamma = 0;
    std::vector<double> pi_per_symbol;
};

struct ModelNormOptions {
    int max_points = 512;  // pairs for ||Gamma|| are drawn from the finest grid with at most this many points
};

ModelNorms model_norms(const Model& M, double gamma, const Dictionary& dict, const ModelNormOptions& opt = {});
// ||Pi - Pi'|| and ||Gamma - Gamma'|| on a common structure
ModelNorms model_difference(const Model& A, const Model& B, double gamma, const Dictionary& dict,
                            const ModelNormOptions& opt = {});

struct ValidationReport {
    double triangular = 0;
    double group = 0;
    double identity = 0;
    double compat = 0;
    double top_sector = 0;  // Q_zeta Gamma = Q_zeta for zeta = max A
    double max_violation() const;
    bool valid(double tol = 1e-8) const { return max_violation() <= tol; }
};

ValidationReport validate_model(const Model& M, int samples = 1000, std::uint64_t seed = 1);

}  // namespace rsb
