#include "rsb/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "rsb/numerics.hpp"

namespace rsb {

namespace {

double l2(const std::vector<double>& v) {
    double a = 0;
    for (double x : v) a += x * x;
    return std::sqrt(a);
}

double growth_slope(const std::vector<double>& table, const std::vector<bool>& live, int last) {
    std::vector<double> xs, ys;
    for (int n = std::max(0, static_cast<int>(table.size()) - last); n < static_cast<int>(table.size()); ++n)
        if (live[static_cast<std::size_t>(n)] && table[static_cast<std::size_t>(n)] > 0) {
            xs.push_back(n);
            ys.push_back(std::log2(table[static_cast<std::size_t>(n)]));
        }
    return xs.size() >= 2 ? slope_fit(xs, ys) : -std::numeric_limits<double>::infinity();
}

void add_into(Pyramid& dst, const Pyramid& src) {
    for (std::size_t i = 0; i < src.base.size(); ++i) dst.base[i] += src.base[i];
    for (int n = 0; n < src.levels; ++n)
        for (std::size_t i = 0; i < src.details[static_cast<std::size_t>(n)].size(); ++i)
            dst.details[static_cast<std::size_t>(n)][i] += src.details[static_cast<std::size_t>(n)][i];
}

bool is_nonneg_integer(double h) { return h > -1e-9 && std::abs(h - std::round(h)) < 1e-9; }

}  // namespace

std::vector<double> germ_increment(const Germ& g, int n, const Wavelet& w) {
    require(n >= 0 && n < g.finest(), "germ increment: level out of range");
    std::vector<double> coarse, det;
    analysis_step(g.scaling, n, w, g.A[static_cast<std::size_t>(n + 1)], coarse, det);
    const auto& An = g.A[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] -= An[i];
    return coarse;
}

SewingResult sewing_limit(const Germ& g, const Wavelet& w, double alpha, double gamma, double p, double q,
                          double max_growth) {
    const Scaling& s = g.scaling;
    const int N = g.finest();
    require(N >= 1, "sewing: need at least two levels");
    require(gamma > 0, "sewing: gamma must be positive");
    for (int n = 0; n <= N; ++n)
        require(static_cast<std::int64_t>(g.A[static_cast<std::size_t>(n)].size()) == Grid(s, n).size(),
                "sewing: germ level size mismatch");
    SewingResult r;
    r.xi = Pyramid(s, N);
    r.xi.base = g.A[0];
    auto& c = r.cert;
    c.alpha = alpha;
    c.gamma = gamma;
    std::vector<bool> live;
    std::vector<double> rel;
    std::vector<double> coarse, det;
    for (int n = 0; n <= N; ++n) {
        const auto& An = g.A[static_cast<std::size_t>(n)];
        double sc = std::pow(2.0, n * (alpha + 0.5 * s.total()));
        std::vector<double> u(An.size());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = An[i] * sc;
        c.germ.push_back(lpn_norm(u, s, n, p));
        if (n == N) break;
        analysis_step(s, n, w, g.A[static_cast<std::size_t>(n + 1)], coarse, det);
        for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] -= An[i];
        // g_n in V_n: its pyramid occupies the base and the details below n
        if (n == 0) {
            for (std::size_t i = 0; i < coarse.size(); ++i) r.xi.base[i] += coarse[i];
        } else {
            add_into(r.xi, analyze(coarse, s, n, w));
        }
        auto& dn = r.xi.details[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < dn.size(); ++i) dn[i] += det[i];
        c.g_norm.push_back(l2(coarse));
        c.dxi_norm.push_back(l2(det));
        double si = std::pow(2.0, n * (gamma + 0.5 * s.total()));
        double raw = l2(coarse), ref = std::max(l2(An), l2(g.A[static_cast<std::size_t>(n + 1)]));
        rel.push_back(ref > 0 ? raw / ref : 0.0);
        live.push_back(raw > 1e-11 * ref);
        for (auto& v : coarse) v *= si;
        c.increment.push_back(lpn_norm(coarse, s, n, p));
    }
    c.germ_sup = *std::max_element(c.germ.begin(), c.germ.end());
    c.increment_lq = lq_norm(c.increment, q);
    c.increment_growth = growth_slope(c.increment, live, 4);
    if (c.increment_growth > max_growth) {
        std::string diag = "sewing: increment table grows like 2^{" + std::to_string(c.increment_growth) + " n}; last entries";
        for (int n = std::max(0, N - 4); n < N; ++n) diag += " " + std::to_string(c.increment[static_cast<std::size_t>(n)]);
        diag += "; relative raw size";
        for (int n = std::max(0, N - 4); n < N; ++n) diag += " " + std::to_string(rel[static_cast<std::size_t>(n)]);
        throw CertificateError(diag);
    }
    return r;
}

void SewingCertificate::write_csv(std::ostream& os) const {
    os << "n,term,value\n";
    for (std::size_t n = 0; n < germ.size(); ++n) os << n << ",germ," << germ[n] << '\n';
    for (std::size_t n = 0; n < increment.size(); ++n) {
        os << n << ",increment," << increment[n] << '\n';
        os << n << ",g_norm," << g_norm[n] << '\n';
        os << n << ",dxi_norm," << dxi_norm[n] << '\n';
    }
    os << "-1,germ_sup," << germ_sup << "\n-1,increment_lq," << increment_lq << "\n-1,increment_growth,"
       << increment_growth << '\n';
}

Germ random_germ(const Scaling& s, int N, const Wavelet& w, double alpha, double gamma, std::uint64_t seed,
                 double increment_scale) {
    Rng rng(seed);
    Germ g{s, {}};
    std::vector<double> a(static_cast<std::size_t>(Grid(s, 0).size()));
    for (auto& v : a) v = rng.symmetric();
    g.A.push_back(a);
    int np = (1 << s.total()) - 1;
    for (int n = 0; n < N; ++n) {
        std::vector<double> cur = g.A.back();
        double si = increment_scale * std::pow(2.0, -n * (gamma + 0.5 * s.total()));
        double sa = std::pow(2.0, -n * (alpha + 0.5 * s.total()));
        for (auto& v : cur) v += si * rng.symmetric();
        std::vector<double> det(static_cast<std::size_t>(np * Grid(s, n).size()));
        for (auto& v : det) v = sa * rng.symmetric();
        g.A.push_back(synthesis_step(s, n, w, cur, &det));
    }
    return g;
}

Germ consistent_germ(const Pyramid& xi, const Wavelet& w) {
    Germ g{xi.scaling, {}};
    for (int n = 0; n <= xi.levels; ++n) g.A.push_back(synthesize_level(xi, n, w));
    return g;
}

Germ reconstruction_germ(const AveragedMD& fb, const Model& M) {
    const int N = M.levels(), nb = M.size();
    require(fb.finest() == N && fb.size == nb, "reconstruction germ: shape mismatch");
    Germ g{M.structure().scaling(), {}};
    for (int n = 0; n <= N; ++n) {
        const auto& fn = fb.levels[static_cast<std::size_t>(n)];
        std::vector<double> A(fn.size() / static_cast<std::size_t>(nb), 0.0);
        for (int t = 0; t < nb; ++t) {
            bool any = false;
            for (std::size_t x = 0; x < A.size() && !any; ++x) any = fn[x * static_cast<std::size_t>(nb) + static_cast<std::size_t>(t)] != 0.0;
            if (!any) continue;
            auto fp = M.father_pairing(t, n);
            for (std::size_t x = 0; x < A.size(); ++x) A[x] += fn[x * static_cast<std::size_t>(nb) + static_cast<std::size_t>(t)] * fp[x];
        }
        g.A.push_back(std::move(A));
    }
    return g;
}

ReconstructionResult reconstruct(const ModelledDistribution& f, const Model& M, double p, double q) {
    require(f.gamma > 0, "reconstruct: gamma must be positive");
    check_gamma(M.structure(), f.gamma);
    ReconstructionResult r;
    double amin = f.gamma;
    for (double h : M.structure().homogeneities())
        if (!is_nonneg_integer(h)) amin = std::min(amin, h);
    r.alpha_target = amin;
    auto fb = average(f, M);
    auto sr = sewing_limit(reconstruction_germ(fb, M), M.wavelet(), std::min(amin, 0.0), f.gamma, p, q);
    r.xi = std::move(sr.xi);
    r.cert = std::move(sr.cert);
    r.measured_alpha = M.levels() >= 4 && r.xi.l2() > 0 ? critical_exponent(r.xi, p, M.levels() / 2) : amin;
    r.alpha_bar = is_inf(q) ? amin : amin - 1e-3;
    return r;
}

namespace {

// sup over the dictionary of |<xi, eta^lambda_x> - sum_tau f_tau(x) <Pi_x tau, eta^lambda_x>|, x in Lambda_N
std::vector<double> bound_level(const ModelledDistribution& f, const Model& M, const DualSamples& dual,
                                const Dictionary& dict, int m, const ModelledDistribution* g, const Model* Mg,
                                const DualSamples* dual_g) {
    const Scaling& s = M.structure().scaling();
    const int N = M.levels(), nb = M.size();
    std::vector<double> best(static_cast<std::size_t>(M.grid().size()), 0.0);
    for (const auto& eta : dict.profiles()) {
        auto K = sample_test_kernel(eta, dual.grid(), m);
        auto v = restrict_to_level(dual.correlate(K), s, dual.level(), N);
        if (dual_g) {
            auto vg = restrict_to_level(dual_g->correlate(K), s, dual_g->level(), N);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= vg[i];
        }
        for (int t = 0; t < nb; ++t) {
            auto tp = M.test_pairing(t, eta, m);
            for (std::size_t x = 0; x < v.size(); ++x) v[x] -= f.at(static_cast<std::int64_t>(x))[t] * tp[x];
            if (g) {
                auto tg = Mg->test_pairing(t, eta, m);
                for (std::size_t x = 0; x < v.size(); ++x) v[x] += g->at(static_cast<std::int64_t>(x))[t] * tg[x];
            }
        }
        for (std::size_t x = 0; x < v.size(); ++x) best[x] = std::max(best[x], std::abs(v[x]));
    }
    return best;
}

}  // namespace

BoundTable reconstruction_bound(const ModelledDistribution& f, const Model& M, const Pyramid& xi, double p, double q,
                                const Dictionary& dict, int margin) {
    const auto& st = M.structure();
    double amin = 0;
    for (double h : st.homogeneities()) amin = std::min(amin, h);
    require(dict.r() > std::abs(amin), "reconstruction bound: dictionary smoothness must exceed |min A|");
    require(xi.levels == M.levels() && xi.scaling == st.scaling(), "reconstruction bound: pyramid mismatch");
    DualSamples dual(xi, M.wavelet(), M.oversample());
    BoundTable t;
    for (int m = 0; m < M.levels() - margin; ++m) {
        auto best = bound_level(f, M, dual, dict, m, nullptr, nullptr, nullptr);
        double lam = std::ldexp(1.0, -m);
        for (auto& v : best) v /= std::pow(lam, f.gamma);
        t.level.push_back(lpn_norm(best, st.scaling(), M.levels(), p));
    }
    t.aggregate = lq_norm(t.level, q);
    auto nr = model_norms(M, f.gamma, dict);
    t.budget = d_norm(f, M, p, q).total * nr.pi * (1.0 + nr.gamma);
    t.ratio = t.budget > 0 ? t.aggregate / t.budget : 0.0;
    return t;
}

void BoundTable::write_csv(std::ostream& os) const {
    os << "scale,term,value,budget\n";
    for (std::size_t m = 0; m < level.size(); ++m) os << std::ldexp(1.0, -static_cast<int>(m)) << ",level," << level[m] << ',' << budget << '\n';
    os << "all,aggregate," << aggregate << ',' << budget << '\n';
}

TwoModelTable two_model_compare(const ModelledDistribution& f, const Model& M, const ModelledDistribution& g,
                                const Model& Mg, double p, double q, const Dictionary& dict, int margin) {
    auto rf = reconstruct(f, M, p, q);
    auto rg = reconstruct(g, Mg, p, q);
    DualSamples df(rf.xi, M.wavelet(), M.oversample()), dg(rg.xi, Mg.wavelet(), Mg.oversample());
    TwoModelTable t;
    for (int m = 0; m < M.levels() - margin; ++m) {
        auto best = bound_level(f, M, df, dict, m, &g, &Mg, &dg);
        double lam = std::ldexp(1.0, -m);
        for (auto& v : best) v /= std::pow(lam, f.gamma);
        t.level.push_back(lpn_norm(best, M.structure().scaling(), M.levels(), p));
    }
    t.aggregate = lq_norm(t.level, q);
    t.A = model_norms(M, f.gamma, dict);
    t.B = model_norms(Mg, f.gamma, dict);
    t.diff = model_difference(M, Mg, f.gamma, dict);
    t.md = md_distance(f, M, g, Mg, p, q).total;
    t.dnorm_g = d_norm(g, Mg, p, q).total;
    t.budget = t.md * t.A.pi * (1 + t.A.gamma) + t.dnorm_g * (t.diff.pi * (1 + t.A.gamma) + t.B.pi * t.diff.gamma);
    return t;
}

double DerivativeReport::max_error() const {
    double m = 0;
    for (double e : rel_error) m = std::max(m, e);
    return m;
}

namespace {

// central difference of order k (<= any) along axis i, periodic
std::vector<double> difference(const std::vector<double>& u, const Grid& g, int axis, int order) {
    std::vector<double> cur = u, nxt(u.size());
    double h = g.spacing(axis);
    auto shifted = [&](const std::vector<double>& v, std::int64_t xf, int off) {
        Index k = g.unflatten(xf);
        k[static_cast<std::size_t>(axis)] += off;
        return v[static_cast<std::size_t>(g.flatten(k))];
    };
    int twos = order / 2;
    for (int r = 0; r < twos; ++r) {
        for (std::int64_t x = 0; x < g.size(); ++x)
            nxt[static_cast<std::size_t>(x)] = (shifted(cur, x, 1) - 2 * cur[static_cast<std::size_t>(x)] + shifted(cur, x, -1)) / (h * h);
        cur.swap(nxt);
    }
    if (order % 2) {
        for (std::int64_t x = 0; x < g.size(); ++x)
            nxt[static_cast<std::size_t>(x)] = (shifted(cur, x, 1) - shifted(cur, x, -1)) / (2 * h);
        cur.swap(nxt);
    }
    return cur;
}

}  // namespace

DerivativeReport derivative_check(const ModelledDistribution& f, const Model& M, const Pyramid& xi) {
    const auto& st = M.structure();
    const Scaling& s = st.scaling();
    for (const auto& sy : st.symbols()) require(sy.polynomial(), "derivative check: polynomial structure only");
    const int N = M.levels(), d = s.dim();
    require(N >= 3, "derivative check: need N >= 3");
    DualSamples dual(xi, M.wavelet(), M.oversample());
    auto rho = standard_bump(d);
    auto u = restrict_to_level(dual.correlate(sample_test_kernel(rho, dual.grid(), N - 2)), s, dual.level(), N);
    const Grid& g = M.grid();
    double f0max = 0;
    int zero = st.find_poly({});
    for (std::int64_t x = 0; x < g.size(); ++x) f0max = std::max(f0max, std::abs(f.at(x)[zero]));
    DerivativeReport r;
    for (int t = 0; t < st.size(); ++t) {
        if (st[t].hom >= f.gamma) continue;
        const MultiIndex& k = st[t].k;
        auto v = u;
        for (int i = 0; i < d; ++i)
            if (k[static_cast<std::size_t>(i)] > 0) v = difference(v, g, i, k[static_cast<std::size_t>(i)]);
        double kf = mi_factorial(k, d), err = 0, ref = f0max;
        for (std::int64_t x = 0; x < g.size(); ++x) {
            double want = kf * f.at(x)[t];
            ref = std::max(ref, std::abs(want));
            err = std::max(err, std::abs(v[static_cast<std::size_t>(x)] - want));
        }
        r.k.push_back(k);
        r.rel_error.push_back(ref > 0 ? err / ref : err);
    }
    return r;
}

namespace {

struct LiftTerm {
    MultiIndex l;
    double c;
};

std::vector<LiftTerm> lift_terms(const Scaling& s, int q, const MultiIndex& k) {
    const int d = s.dim();
    std::vector<LiftTerm> out;
    for (const auto& l : multi_indices_below(s, q + 0.5 - s.degree(k))) {
        out.push_back({l, 1.0 / (mi_factorial(k, d) * mi_factorial(l, d))});
    }
    return out;
}

// d^J [rho^n_i(u) u^l], J = j + l, t = 2^{n s_i} u; dv[m] = factor.deriv(m, t)
double lift_factor(const double* dv, double sc, int j, int l, double u) {
    int J = j + l;
    double acc = 0;
    for (int a = 0; a <= std::min(J, l); ++a)
        acc += binomial(J, a) * factorial(l) / factorial(l - a) * ipow(u, l - a) * std::pow(sc, 1 + J - a) * dv[J - a];
    return acc;
}

double lift_factor(const Factor1D& f, double sc, int j, int l, double u) {
    double t = sc * u;
    if (std::abs(t) >= 1.0) return 0.0;
    std::vector<double> dv(static_cast<std::size_t>(j + l + 1));
    for (int m = 0; m <= j + l; ++m) dv[static_cast<std::size_t>(m)] = f.deriv(m, t);
    return lift_factor(dv.data(), sc, j, l, u);
}

double eval_lift(const TestProfile& rho, const Scaling& s, const std::vector<LiftTerm>& terms, int n,
                 const MultiIndex& j, const Point& u) {
    const int d = s.dim();
    double total = 0;
    for (const auto& lt : terms) {
        double term = lt.c;
        for (int i = 0; i < d && term != 0.0; ++i) {
            auto ui = static_cast<std::size_t>(i);
            term *= lift_factor(rho.factors[ui], std::ldexp(1.0, n * s[i]), j[ui], lt.l[ui], u[ui]);
        }
        total += term;
    }
    return rho.scale * total;
}

}  // namespace

// sum over l of (-1)^{|l|}/(k! l!) prod_i d^{j_i + l_i}[rho^n_i(u_i) (-u_i)^{l_i}]
double lift_kernel(const TestProfile& rho, const Scaling& s, int q, const MultiIndex& k, int n, const MultiIndex& j,
                   const Point& u) {
    return eval_lift(rho, s, lift_terms(s, q, k), n, j, u);
}

double lp_norm_pyramid(const Pyramid& xi, const Wavelet& w, double p, int oversample) {
    int M = xi.levels + oversample;
    auto c = refine(synthesize_level(xi, xi.levels, w), xi.scaling, xi.levels, M, w);
    return lpn_norm(point_values(c, xi.scaling, M, w), xi.scaling, M, p);
}

LiftResult lift(const Pyramid& xi, const Model& M, double gamma, double p, double q, int oversample) {
    const auto& st = M.structure();
    const Scaling& s = st.scaling();
    for (const auto& sy : st.symbols()) require(sy.polynomial(), "lift: polynomial structure only");
    require(xi.scaling == s && xi.levels == M.levels(), "lift: pyramid does not match the model");
    require(gamma > 0, "lift: gamma must be positive");
    require(!is_nonneg_integer(gamma), "lift: gamma must not be an integer");
    check_gamma(st, gamma);
    const int N = M.levels(), nb = M.size(), d = s.dim();
    const int qd = static_cast<int>(std::floor(gamma));
    int L = oversample;
    if (L <= 0) {
        L = 7;
        while (L > M.oversample() && (N + L) * s.total() > 24) --L;
    }
    DualSamples dual(xi, M.wavelet(), L);
    auto rho = standard_bump(d);
    LiftResult r;
    r.fbar.gamma = gamma;
    r.fbar.size = nb;
    for (int n = 0; n <= N; ++n) {
        Grid gn(s, n);
        std::vector<double> lv(static_cast<std::size_t>(gn.size() * nb), 0.0);
        Point hw{};
        for (int i = 0; i < d; ++i) hw[static_cast<std::size_t>(i)] = std::ldexp(1.0, -n * s[i]);
        for (int t = 0; t < nb; ++t) {
            if (st[t].hom >= gamma) continue;
            const MultiIndex& k = st[t].k;
            int absk = 0;
            for (int i = 0; i < d; ++i) absk += k[static_cast<std::size_t>(i)];
            double sign = absk % 2 ? -1.0 : 1.0;
            auto terms = lift_terms(s, qd, k);
            // tabulate the one-dimensional factors on the lattice offsets
            const Grid& dg = dual.grid();
            std::vector<std::vector<std::vector<double>>> tab(static_cast<std::size_t>(d));
            std::int64_t hi[kMaxDim];
            for (int i = 0; i < d; ++i) {
                auto ui = static_cast<std::size_t>(i);
                hi[i] = static_cast<std::int64_t>(std::floor(hw[ui] * dg.extent(i) + 1e-9));
                int lmax = 0;
                for (const auto& lt : terms) lmax = std::max(lmax, lt.l[ui]);
                tab[ui].assign(static_cast<std::size_t>(lmax + 1), std::vector<double>(static_cast<std::size_t>(2 * hi[i] + 1)));
                double sc = std::ldexp(1.0, n * s[i]);
                std::vector<double> dv(static_cast<std::size_t>(k[ui] + lmax + 1));
                for (std::int64_t o = -hi[i]; o <= hi[i]; ++o) {
                    double u = static_cast<double>(o) * dg.spacing(i);
                    if (std::abs(sc * u) >= 1.0) continue;
                    for (std::size_t m = 0; m < dv.size(); ++m) dv[m] = rho.factors[ui].deriv(static_cast<int>(m), sc * u);
                    for (int l = 0; l <= lmax; ++l)
                        tab[ui][static_cast<std::size_t>(l)][static_cast<std::size_t>(o + hi[i])] = lift_factor(dv.data(), sc, k[ui], l, u);
                }
            }
            auto K = periodize(dg, hw, [&](const Point& u) {
                std::size_t off[kMaxDim];
                for (int i = 0; i < d; ++i)
                    off[i] = static_cast<std::size_t>(std::llround(u[static_cast<std::size_t>(i)] * static_cast<double>(dg.extent(i))) + hi[i]);
                double total = 0;
                for (const auto& lt : terms) {
                    double term = lt.c;
                    for (int i = 0; i < d; ++i) term *= tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(lt.l[static_cast<std::size_t>(i)])][off[i]];
                    total += term;
                }
                return sign * rho.scale * total;
            });
            auto v = restrict_to_level(dual.correlate(K), s, dual.level(), n);
            for (std::size_t x = 0; x < v.size(); ++x) lv[x * static_cast<std::size_t>(nb) + static_cast<std::size_t>(t)] = v[x];
        }
        r.fbar.levels.push_back(std::move(lv));
    }
    r.convergence = unaverage(r.fbar, M, p);
    r.f = r.convergence.f;
    r.f.gamma = gamma;
    r.reconstructed = reconstruct(r.f, M, p, q).xi;
    double base = lp_norm_pyramid(xi, M.wavelet(), p);
    double diff = lp_norm_pyramid(r.reconstructed - xi, M.wavelet(), p);
    r.roundtrip = base > 0 ? diff / base : diff;
    return r;
}

UniquenessReport uniqueness_probe(const Pyramid& a, const Pyramid& b, const Wavelet& w, double gamma, double threshold) {
    require(a.scaling == b.scaling && a.levels == b.levels, "uniqueness probe: pyramids differ in shape");
    DualSamples dual(a - b, w);
    auto rho = standard_bump(a.scaling.dim());
    UniquenessReport r;
    for (int j = 0; j < a.levels; ++j) {
        auto v = restrict_to_level(dual.correlate(sample_test_kernel(rho, dual.grid(), j)), a.scaling, dual.level(), a.levels);
        double m = 0;
        for (double x : v) m = std::max(m, std::abs(x));
        r.level.push_back(m);
        r.ratio = std::max(r.ratio, m * std::pow(2.0, j * gamma));
    }
    r.flagged = r.ratio > threshold;
    return r;
}

double l2_distance_to_function(const Pyramid& xi, const Wavelet& w, const std::function<double(const Point&)>& F,
                               int extra) {
    const Scaling& s = xi.scaling;
    const int N = xi.levels, M = N + extra;
    auto c = project_smooth(s, M, w, F);
    double tail = 0;
    std::vector<double> coarse, det;
    for (int n = M - 1; n >= N; --n) {
        analysis_step(s, n, w, c, coarse, det);
        for (double v : det) tail += v * v;
        c.swap(coarse);
    }
    auto mine = synthesize_level(xi, N, w);
    double e = 0;
    for (std::size_t i = 0; i < c.size(); ++i) e += (mine[i] - c[i]) * (mine[i] - c[i]);
    return std::sqrt(e + tail);
}

}  // namespace rsb
