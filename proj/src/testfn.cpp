#include "rsb/testfn.hpp"

#include <algorithm>
#include <cmath>

#include "quadrature.hpp"

namespace rsb {

namespace {

double poly_deriv(const std::vector<double>& p, int i, double u) {
    double acc = 0;
    for (int a = static_cast<int>(p.size()) - 1; a >= i; --a) {
        double c = p[static_cast<std::size_t>(a)];
        for (int q = 0; q < i; ++q) c *= (a - q);
        acc = acc * u + c;
    }
    return acc;
}

}  // namespace

double Factor1D::deriv(int j, double t) const {
    double u = (t - shift) / width;
    if (u <= -1.0 || u >= 1.0) return 0.0;
    CenteredBump b{order};
    j += outer;
    double acc = 0;
    for (int i = 0; i <= j && i < static_cast<int>(poly.size()); ++i)
        acc += binomial(j, i) * poly_deriv(poly, i, u) * b.deriv(j - i, u);
    return acc * std::pow(width, -j);
}

double Factor1D::sup_deriv(int j) const {
    double m = 0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(deriv(j, shift + width * (-1.0 + 2.0 * i / n))));
    return m;
}

double Factor1D::moment(int k) const {
    return piecewise_integral([&](double t) { return std::pow(t, k) * deriv(0, t); }, shift - width, shift + width, order);
}

double TestProfile::value(const Point& x) const {
    MultiIndex k{};
    return deriv(k, x);
}

double TestProfile::deriv(const MultiIndex& k, const Point& x) const {
    double r = scale;
    for (int i = 0; i < dim() && r != 0.0; ++i)
        r *= factors[static_cast<std::size_t>(i)].deriv(k[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]);
    return r;
}

double TestProfile::moment(const MultiIndex& k) const {
    double r = scale;
    for (int i = 0; i < dim(); ++i) r *= factors[static_cast<std::size_t>(i)].moment(k[static_cast<std::size_t>(i)]);
    return r;
}

double TestProfile::cr_norm(const Scaling& s, int r) const {
    double best = 0;
    for (const auto& k : multi_indices_below(s, r + 0.5)) {
        double v = std::abs(scale);
        for (int i = 0; i < dim(); ++i) v *= factors[static_cast<std::size_t>(i)].sup_deriv(k[static_cast<std::size_t>(i)]);
        best = std::max(best, v);
    }
    return best;
}

TestProfile standard_bump(int d, int order) {
    TestProfile p;
    p.name = "rho";
    Factor1D f;
    f.order = order;
    p.factors.assign(static_cast<std::size_t>(d), f);
    return p;
}

Dictionary Dictionary::standard(const Scaling& s, int r, int count) {
    require(r >= 0, "dictionary: r must be >= 0");
    require(count >= 1 && count <= 8, "dictionary: count must be in 1..8");
    struct Spec {
        const char* name;
        std::vector<double> poly;
        double width, shift;
    };
    const std::vector<Spec> family = {
        {"bump", {1.0}, 1.0, 0.0},          {"bump/2", {1.0}, 0.5, 0.0},
        {"odd", {0.0, 1.0}, 1.0, 0.0},      {"bump/4", {1.0}, 0.25, 0.0},
        {"right", {1.0}, 0.5, 0.45},        {"left", {1.0}, 0.5, -0.45},
        {"mexican", {1.0, 0.0, -6.0}, 1.0, 0.0}, {"bump/8", {1.0}, 0.125, 0.0},
    };
    Dictionary D;
    D.s_ = s;
    D.r_ = r;
    for (int i = 0; i < count; ++i) {
        const Spec& sp = family[static_cast<std::size_t>(i)];
        TestProfile p;
        p.name = sp.name;
        for (int a = 0; a < s.dim(); ++a) {
            Factor1D f;
            f.width = sp.width;
            f.shift = sp.shift;
            // polynomial corrections only act along the first coordinate
            if (a == 0) f.poly = sp.poly;
            p.factors.push_back(f);
        }
        p.scale = 1.0 / p.cr_norm(s, r);
        D.profiles_.push_back(p);
    }
    return D;
}

Dictionary Dictionary::annihilating(double beta) const {
    require(beta >= 0, "dictionary: annihilation degree must be >= 0");
    Dictionary D = *this;
    D.beta_ = beta;
    int m = static_cast<int>(std::floor(beta / s_[0])) + 1;
    for (auto& p : D.profiles_) {
        p.factors[0].outer += m;
        p.scale = 1.0;
        p.scale = 1.0 / p.cr_norm(s_, r_);
        p.name += "/d" + std::to_string(m);
    }
    return D;
}

std::vector<double> periodize(const Grid& grid, const Point& halfwidth, const std::function<double(const Point&)>& fn) {
    int d = grid.dim();
    std::vector<double> out(static_cast<std::size_t>(grid.size()), 0.0);
    Index lo{}, hi{};
    for (int i = 0; i < d; ++i) {
        auto ui = static_cast<std::size_t>(i);
        hi[ui] = static_cast<std::int64_t>(std::floor(halfwidth[ui] * grid.extent(i) + 1e-9));
        lo[ui] = -hi[ui];
    }
    for_each_offset(d, lo, hi, [&](const Index& k) {
        double v = fn(grid.point(k));
        if (v != 0.0) out[static_cast<std::size_t>(grid.flatten(k))] += v;
    });
    return out;
}

std::vector<double> sample_test_kernel(const TestProfile& eta, const Grid& grid, int m, const MultiIndex* k) {
    const Scaling& s = grid.scaling();
    int d = s.dim();
    Point hw{}, inv{};
    double pref = std::ldexp(1.0, m * s.total());
    for (int i = 0; i < d; ++i) {
        auto ui = static_cast<std::size_t>(i);
        hw[ui] = std::ldexp(1.0, -m * s[i]);
        inv[ui] = std::ldexp(1.0, m * s[i]);
    }
    MultiIndex k0{};
    const MultiIndex& kk = k ? *k : k0;
    if (k) pref *= std::ldexp(1.0, m * s.degree(*k));
    return periodize(grid, hw, [&](const Point& u) {
        Point v{};
        for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] * inv[static_cast<std::size_t>(i)];
        return pref * eta.deriv(kk, v);
    });
}

}  // namespace rsb
