#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rsb/bspline.hpp"
#include "rsb/grid.hpp"

namespace rsb {

// eta(t) = d^outer/dt^outer [p(u) b(u)], u = (t - shift) / width
struct Factor1D {
    std::vector<double> poly{1.0};  // ascending coefficients in u
    double width = 1.0;
    double shift = 0.0;
    int outer = 0;
    int order = 12;

    double deriv(int j, double t) const;
    double sup_deriv(int j) const;
    double moment(int k) const;
};

// tensor-product profile supported in the unit s-ball
struct TestProfile {
    std::string name;
    std::vector<Factor1D> factors;
    double scale = 1.0;

    int dim() const { return static_cast<int>(factors.size()); }
    double value(const Point& x) const;
    double deriv(const MultiIndex& k, const Point& x) const;
    double moment(const MultiIndex& k) const;
    // max over |k|_s <= r of sup |d^k eta|
    double cr_norm(const Scaling& s, int r) const;
};

// the standard rho: normalized bump, integral 1
TestProfile standard_bump(int d, int order = 12);

class Dictionary {
public:
    // `count` profiles from the built-in family, normalized to C^r norm 1
    static Dictionary standard(const Scaling& s, int r, int count = 8);
    // d_0^m of every profile, m s_0 > beta, renormalized
    Dictionary annihilating(double beta) const;

    const Scaling& scaling() const { return s_; }
    int r() const { return r_; }
    double beta() const { return beta_; }
    const std::vector<TestProfile>& profiles() const { return profiles_; }
    std::size_t size() const { return profiles_.size(); }

private:
    Scaling s_;
    int r_ = 0;
    double beta_ = -1.0;
    std::vector<TestProfile> profiles_;
};

// sum of fn(u) over lattice offsets u of `grid` with |u_i| <= halfwidth_i,
// accumulated at the periodic index of u
std::vector<double> periodize(const Grid& grid, const Point& halfwidth, const std::function<double(const Point&)>& fn);

// eta^lambda_0 with lambda = 2^{-m} sampled on grid, periodized:
// lambda^{-|s|} (d^k eta)(u / lambda^s) * lambda^{-|k|_s}
std::vector<double> sample_test_kernel(const TestProfile& eta, const Grid& grid, int m, const MultiIndex* k = nullptr);

}  // namespace rsb
