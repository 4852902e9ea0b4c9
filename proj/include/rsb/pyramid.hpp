#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rsb/grid.hpp"
#include "rsb/wavelet.hpp"

namespace rsb {

// b^0 on Lambda_0 plus a^{n,psi} for 0 <= n < N, detail[n] laid out [psi][x].
struct Pyramid {
    Scaling scaling;
    int levels = 0;
    std::vector<double> base;
    std::vector<std::vector<double>> details;

    Pyramid() = default;
    Pyramid(Scaling s, int N);

    int num_psi() const { return (1 << scaling.total()) - 1; }
    std::int64_t level_size(int n) const { return Grid(scaling, n).size(); }
    double& detail(int n, int psi, std::int64_t x) {
        return details[static_cast<std::size_t>(n)][static_cast<std::size_t>(psi * level_size(n) + x)];
    }
    double detail(int n, int psi, std::int64_t x) const {
        return details[static_cast<std::size_t>(n)][static_cast<std::size_t>(psi * level_size(n) + x)];
    }
    std::size_t storage() const;
    // coefficient l2 norm
    double l2() const;

    Pyramid& operator+=(const Pyramid& o);
    Pyramid& operator*=(double c);
};

Pyramid operator+(Pyramid a, const Pyramid& b);
Pyramid operator-(Pyramid a, const Pyramid& b);
Pyramid operator*(double c, Pyramid a);

// local index e along one dimension of an anisotropic step -> psi index
int psi_index(const Scaling& s, const MultiIndex& e);
MultiIndex psi_local(const Scaling& s, int psi);

// samples u at level N (u ~ point values); coefficients c = 2^{-N|s|/2} u
Pyramid forward_transform(const std::vector<double>& samples, const Scaling& s, int N, const Wavelet& w);
std::vector<double> inverse_transform(const Pyramid& p, const Wavelet& w);

// V_N coefficients <xi, phi^N_x> <-> pyramid, no sample scaling
Pyramid analyze(const std::vector<double>& coeffs, const Scaling& s, int N, const Wavelet& w);
std::vector<double> synthesize_level(const Pyramid& p, int n, const Wavelet& w);
// V_from coefficients -> V_to coefficients with zero details
std::vector<double> refine(const std::vector<double>& coeffs, const Scaling& s, int from, int to, const Wavelet& w);
// one anisotropic step: level n+1 coefficients -> (level n coefficients, details)
void analysis_step(const Scaling& s, int n, const Wavelet& w, const std::vector<double>& fine,
                   std::vector<double>& coarse, std::vector<double>& det);
std::vector<double> synthesis_step(const Scaling& s, int n, const Wavelet& w, const std::vector<double>& coarse,
                                   const std::vector<double>* det);

enum class Subspace { V, Vperp };
Pyramid project(const Pyramid& p, int n, Subspace which);

enum class BasisKind { Father, Mother };
// periodized phi^n_x or psi^n_x at query points (torus coordinates)
std::vector<double> eval_basis(const Wavelet& w, const Scaling& s, BasisKind kind, int n, const Index& x, int psi,
                               const std::vector<Point>& queries);
// non-periodized value on R^d, x in lifted coordinates
double basis_value(const Wavelet& w, const Scaling& s, BasisKind kind, int n, const Point& x, int psi, const Point& y);

// point values of the V_N function sum_x c_x phi^N_x on Lambda_N
std::vector<double> point_values(const std::vector<double>& coeffs, const Scaling& s, int N, const Wavelet& w);

void write_rsbf(std::ostream& os, const Pyramid& p);
Pyramid read_rsbf(std::istream& is);
void save_rsbf(const std::string& path, const Pyramid& p);
Pyramid load_rsbf(const std::string& path);

}  // namespace rsb
