#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsb/model.hpp"

namespace rsb {

// f: Lambda_N -> T_{<gamma}, values[x * size + tau]
struct ModelledDistribution {
    double gamma = 0;
    int levels = 0;
    int size = 0;
    std::vector<double> values;

    ModelledDistribution() = default;
    ModelledDistribution(const Model& M, double gamma);

    double* at(std::int64_t x) { return values.data() + x * size; }
    const double* at(std::int64_t x) const { return values.data() + x * size; }

    ModelledDistribution& operator+=(const ModelledDistribution& o);
    ModelledDistribution& operator*=(double c);
};

ModelledDistribution operator+(ModelledDistribution a, const ModelledDistribution& b);
ModelledDistribution operator-(ModelledDistribution a, const ModelledDistribution& b);
ModelledDistribution operator*(double c, ModelledDistribution a);

// per-level maps fbar^(n): Lambda_n -> T_{<gamma}, n = 0..N
struct AveragedMD {
    double gamma = 0;
    int size = 0;
    std::vector<std::vector<double>> levels;

    int finest() const { return static_cast<int>(levels.size()) - 1; }
};

// gamma must avoid every homogeneity and every scaled degree |k|_s
void check_gamma(const Structure& st, double gamma);

// f_k = d^k F / k! on the polynomial symbols, other symbols zero;
// dF(k, x) returns d^k F at x
ModelledDistribution taylor_lift(const Model& M, double gamma,
                                 const std::function<double(const MultiIndex&, const Point&)>& dF);
// constant coefficient c on symbol tau
ModelledDistribution constant_md(const Model& M, double gamma, int tau, double c = 1.0);
// f with the symbols of homogeneity >= gamma' removed
ModelledDistribution project_below(const ModelledDistribution& f, const Model& M, double gamma_prime);

struct DNormReport {
    std::vector<double> zetas;
    std::vector<double> local;                     // per zeta
    std::vector<std::vector<double>> translation;  // [zeta][n], n = 0..; unused levels are 0
    std::vector<std::vector<double>> consistency;  // dbar only
    std::vector<std::vector<double>> combined;     // dbar only, the E^C_{n+1} quantity
    std::vector<double> truncation;                // estimated share of the translation sum beyond level N
    double total = 0;

    void write_csv(std::ostream& os) const;
};

// translation terms run over 2 <= n <= N, i.e. ||h||_s <= 1/4
DNormReport d_norm(const ModelledDistribution& f, const Model& M, double p, double q);
DNormReport dbar_norm(const AveragedMD& fb, const Model& M, double p, double q);
// the two-model distance with the same discretization as d_norm
DNormReport md_distance(const ModelledDistribution& f, const Model& M, const ModelledDistribution& g, const Model& Mg,
                        double p, double q);

// closed-box Riemann average of Gamma_{x,y} f(y) over B(x, 2^{-n}); fbar^(N) = f
AveragedMD average(const ModelledDistribution& f, const Model& M);

struct UnaverageResult {
    ModelledDistribution f;                        // f_N
    std::vector<std::vector<double>> increments;   // [zeta][n] ||f_{n+1} - f_n||_{L^p}
    std::vector<std::vector<double>> errors;       // [zeta][n] ||f_n - reference||, if given
    std::vector<double> decay;                     // fitted exponent of the increments per zeta
    bool divergent = false;
};

// f_n(x) = Gamma_{x, x_n} fbar^(n)(x_n) for every level
UnaverageResult unaverage(const AveragedMD& fb, const Model& M, double p = 2.0,
                          const ModelledDistribution* reference = nullptr);

struct PropagationReport {
    std::vector<double> zetas;
    std::vector<double> lhs;       // sup_n ||fbar^(n)_zeta||_{l^p_n}
    std::vector<double> level0;
    std::vector<double> combined;  // sum over delta >= zeta of the E^C term
    double K = 0;                  // smallest constant making the bound hold
    bool holds = true;
};

PropagationReport check_local_propagation(const AveragedMD& fb, const Model& M, double p, double q,
                                          double Kmax = 10.0);

void write_md(std::ostream& os, const ModelledDistribution& f, const Model& M);
ModelledDistribution read_md(std::istream& is, const Model& M);

}  // namespace rsb
