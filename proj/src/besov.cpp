#include "rsb/besov.hpp"

#include <algorithm>
#include <cmath>

#include "rsb/numerics.hpp"
#include "rsb/pairing.hpp"

namespace rsb {

double lpn_norm(const std::vector<double>& u, const Scaling& s, int n, double p) {
    require(static_cast<std::int64_t>(u.size()) == Grid(s, n).size(), "lpn_norm: size mismatch");
    return weighted_pnorm(u, std::ldexp(1.0, -n * s.total()), p);
}

double lq_norm(const std::vector<double>& v, double q) { return weighted_pnorm(v, 1.0, q); }

void check_params(const BesovParams& b) {
    require(b.p >= 1.0 && b.q >= 1.0, "besov: p and q must be >= 1");
    require(std::isfinite(b.alpha), "besov: alpha must be finite");
}

BesovReport besov_norm_wavelet(const Pyramid& xi, const BesovParams& b) {
    check_params(b);
    require(xi.levels >= 1 && !xi.base.empty(), "besov: empty pyramid");
    const Scaling& s = xi.scaling;
    BesovReport rep;
    rep.base = lpn_norm(xi.base, s, 0, b.p);
    int np = xi.num_psi();
    rep.table.assign(static_cast<std::size_t>(xi.levels), std::vector<double>(static_cast<std::size_t>(np)));
    rep.level_sup.assign(static_cast<std::size_t>(xi.levels), 0.0);
    std::vector<double> u;
    for (int n = 0; n < xi.levels; ++n) {
        std::int64_t sz = xi.level_size(n);
        double inv = std::pow(2.0, n * (0.5 * s.total() + b.alpha));
        for (int psi = 0; psi < np; ++psi) {
            const double* a = xi.details[static_cast<std::size_t>(n)].data() + psi * sz;
            u.assign(a, a + sz);
            double v = inv * lpn_norm(u, s, n, b.p);
            rep.table[static_cast<std::size_t>(n)][static_cast<std::size_t>(psi)] = v;
            rep.level_sup[static_cast<std::size_t>(n)] = std::max(rep.level_sup[static_cast<std::size_t>(n)], v);
        }
    }
    double best = 0;
    std::vector<double> col(static_cast<std::size_t>(xi.levels));
    for (int psi = 0; psi < np; ++psi) {
        for (int n = 0; n < xi.levels; ++n) col[static_cast<std::size_t>(n)] = rep.table[static_cast<std::size_t>(n)][static_cast<std::size_t>(psi)];
        best = std::max(best, lq_norm(col, b.q));
    }
    rep.value = rep.base + best;
    return rep;
}

std::vector<double> unweighted_levels(const Pyramid& xi, double p) {
    BesovParams b{0.0, p, kInf};
    auto rep = besov_norm_wavelet(xi, b);
    return rep.level_sup;
}

double critical_exponent(const Pyramid& xi, double p, int from) {
    auto t = unweighted_levels(xi, p);
    require(from >= 0 && xi.levels - from >= 2, "critical_exponent: need at least two levels");
    std::vector<double> x, y;
    for (int n = from; n < xi.levels; ++n) {
        double v = t[static_cast<std::size_t>(n)];
        if (v <= 0) continue;
        x.push_back(n);
        y.push_back(std::log2(v));
    }
    require(x.size() >= 2, "critical_exponent: all levels vanish");
    return -slope_fit(x, y);
}

namespace {

// per-x sup over the dictionary of |<xi, eta^lambda_x>|, x in Lambda_N
std::vector<double> dictionary_sup(const DualSamples& ds, const Dictionary& dict, int m, int N) {
    const Scaling& s = ds.grid().scaling();
    std::vector<double> best(static_cast<std::size_t>(Grid(s, N).size()), 0.0);
    for (const auto& eta : dict.profiles()) {
        auto ker = sample_test_kernel(eta, ds.grid(), m);
        auto vals = restrict_to_level(ds.correlate(ker), s, ds.level(), N);
        for (std::size_t i = 0; i < vals.size(); ++i) best[i] = std::max(best[i], std::abs(vals[i]));
    }
    return best;
}

}  // namespace

TestfnReport besov_norm_testfn(const Pyramid& xi, const BesovParams& b, const Dictionary& dict, const Wavelet& w,
                               int oversample) {
    check_params(b);
    require(xi.levels >= 1, "besov: empty pyramid");
    require(dict.scaling() == xi.scaling, "besov: dictionary scaling mismatch");
    require(dict.r() > std::abs(b.alpha), "besov: dictionary r must exceed |alpha|");
    const int N = xi.levels;
    DualSamples ds(xi, w, oversample);
    TestfnReport rep;
    const Dictionary* use = &dict;
    Dictionary ann;
    if (b.alpha >= 0) {
        rep.first = lpn_norm(dictionary_sup(ds, dict, 0, N), xi.scaling, N, b.p);
        ann = dict.annihilating(std::floor(b.alpha));
        use = &ann;
    }
    for (int n = 0; n < N; ++n) {
        auto sup = dictionary_sup(ds, *use, n, N);
        rep.level.push_back(std::pow(2.0, n * b.alpha) * lpn_norm(sup, xi.scaling, N, b.p));
    }
    rep.value = rep.first + lq_norm(rep.level, b.q);
    return rep;
}

MollifyResult mollify(const Pyramid& xi, int m, const Wavelet& w, double alpha, int oversample) {
    require(m >= 0, "mollify: scale exponent must be >= 0");
    DualSamples ds(xi, w, oversample);
    auto rho = standard_bump(xi.scaling.dim());
    MollifyResult r;
    r.values = restrict_to_level(ds.correlate(sample_test_kernel(rho, ds.grid(), m)), xi.scaling, ds.level(), xi.levels);
    r.hypothesis_ok = alpha > 0;
    return r;
}

Pyramid synthesize_dirac(const Scaling& s, int N, const Wavelet& w, const Point& x0) {
    require(N >= 1, "synthesize: N must be >= 1");
    Pyramid p(s, N);
    std::vector<Point> q{x0};
    Grid g0(s, 0);
    p.base[0] = eval_basis(w, s, BasisKind::Father, 0, g0.unflatten(0), 0, q)[0];
    for (int n = 0; n < N; ++n) {
        Grid g(s, n);
        for (int psi = 0; psi < p.num_psi(); ++psi)
            for (std::int64_t x = 0; x < g.size(); ++x) {
                p.detail(n, psi, x) = eval_basis(w, s, BasisKind::Mother, n, g.unflatten(x), psi, q)[0];
            }
    }
    return p;
}

Pyramid synthesize_smooth(const Scaling& s, int N, const Wavelet& w, const std::function<double(const Point&)>& F) {
    require(N >= 1, "synthesize: N must be >= 1");
    Grid g(s, N);
    std::vector<double> u(static_cast<std::size_t>(g.size()));
    for (std::int64_t i = 0; i < g.size(); ++i) u[static_cast<std::size_t>(i)] = F(g.point(g.unflatten(i)));
    return forward_transform(u, s, N, w);
}

Pyramid synthesize_random_besov(const Scaling& s, int N, double alpha, std::uint64_t seed) {
    require(N >= 1, "synthesize: N must be >= 1");
    Pyramid p(s, N);
    Rng rng(seed);
    for (auto& b : p.base) b = rng.symmetric();
    for (int n = 0; n < N; ++n) {
        double sc = std::pow(2.0, -n * (alpha + 0.5 * s.total()));
        for (auto& a : p.details[static_cast<std::size_t>(n)]) a = sc * rng.symmetric();
    }
    return p;
}

}  // namespace rsb
