#include "rsb/modelled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "binio.hpp"
#include "rsb/besov.hpp"
#include "rsb/numerics.hpp"

namespace rsb {

ModelledDistribution::ModelledDistribution(const Model& M, double g)
    : gamma(g), levels(M.levels()), size(M.size()),
      values(static_cast<std::size_t>(M.grid().size() * M.size()), 0.0) {}

ModelledDistribution& ModelledDistribution::operator+=(const ModelledDistribution& o) {
    require(o.values.size() == values.size() && o.size == size, "modelled distribution: shape mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

ModelledDistribution& ModelledDistribution::operator*=(double c) {
    for (auto& v : values) v *= c;
    return *this;
}

ModelledDistribution operator+(ModelledDistribution a, const ModelledDistribution& b) { return a += b; }
ModelledDistribution operator-(ModelledDistribution a, const ModelledDistribution& b) {
    require(a.values.size() == b.values.size(), "modelled distribution: shape mismatch");
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] -= b.values[i];
    return a;
}
ModelledDistribution operator*(double c, ModelledDistribution a) { return a *= c; }

void check_gamma(const Structure& st, double gamma) {
    require(std::isfinite(gamma), "gamma must be finite");
    for (double z : st.homogeneities())
        require(std::abs(z - gamma) > 1e-9, "gamma coincides with a homogeneity of the structure");
    if (gamma >= 0)
        for (const auto& k : multi_indices_below(st.scaling(), gamma + 1.0))
            require(std::abs(st.scaling().degree(k) - gamma) > 1e-9, "gamma coincides with a polynomial degree");
}

namespace {

struct Sectors {
    std::vector<double> zetas;
    std::vector<std::vector<int>> members;
};

Sectors sectors_below(const Structure& st, double gamma) {
    Sectors s;
    for (double z : st.homogeneities())
        if (z < gamma) {
            s.zetas.push_back(z);
            s.members.push_back(st.sector(z));
        }
    return s;
}

double sector_abs(const double* v, const std::vector<int>& members) {
    double m = 0;
    for (int t : members) m = std::max(m, std::abs(v[t]));
    return m;
}

void check_pair(const ModelledDistribution& f, const Model& M) {
    require(f.size == M.size() && f.levels == M.levels() &&
                static_cast<std::int64_t>(f.values.size()) == M.grid().size() * M.size(),
            "modelled distribution does not match the model");
    check_gamma(M.structure(), f.gamma);
    const auto& st = M.structure();
    for (int t = 0; t < st.size(); ++t) {
        if (st[t].hom < f.gamma) continue;
        for (std::int64_t x = 0; x < M.grid().size(); ++x)
            require(f.at(x)[t] == 0.0, "modelled distribution has a component at homogeneity >= gamma");
    }
}

Index add(const Index& a, const Index& b) {
    Index r{};
    for (int i = 0; i < kMaxDim; ++i) r[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
    return r;
}

// E_n offsets in Lambda_N units
std::vector<Index> unit_offsets(const Scaling& s, int n, int N, std::int64_t reach) {
    std::vector<Index> out;
    Index lo{}, hi{};
    for (int i = 0; i < s.dim(); ++i) {
        lo[static_cast<std::size_t>(i)] = -reach;
        hi[static_cast<std::size_t>(i)] = reach;
    }
    Grid gn(s, n), gN(s, N);
    for_each_offset(s.dim(), lo, hi, [&](const Index& e) {
        bool zero = true;
        for (int i = 0; i < s.dim(); ++i) zero = zero && e[static_cast<std::size_t>(i)] == 0;
        if (!zero) out.push_back(gn.embed_into(gN, e));
    });
    return out;
}

double qsum(const std::vector<double>& terms, double q) {
    if (is_inf(q)) {
        double m = 0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    double a = 0;
    for (double t : terms) a += std::pow(t, q);
    return std::pow(a, 1.0 / q);
}

double tail_share(const std::vector<double>& t, int last, double q) {
    if (last < 1 || t[static_cast<std::size_t>(last)] == 0.0) return 0.0;
    double prev = t[static_cast<std::size_t>(last - 1)];
    if (prev == 0.0) return 1.0;
    double r = t[static_cast<std::size_t>(last)] / prev;
    if (r >= 1.0) return 1.0;
    if (is_inf(q)) return 0.0;
    double body = 0;
    for (double v : t) body += std::pow(v, q);
    double rq = std::pow(r, q);
    double tail = std::pow(t[static_cast<std::size_t>(last)], q) * rq / (1.0 - rq);
    return tail / (body + tail);
}

// shared translation loop: numerator(x, h, out) fills out[0..nb)
template <class Num>
std::vector<std::vector<double>> translation_terms(const Model& M, const Sectors& sec, double gamma, double p, double q,
                                                   Num&& numerator) {
    const Scaling& s = M.structure().scaling();
    const int N = M.levels(), nb = M.size();
    const Grid& g = M.grid();
    std::vector<std::vector<double>> terms(sec.zetas.size(), std::vector<double>(static_cast<std::size_t>(N + 1), 0.0));
    std::vector<double> diff(static_cast<std::size_t>(nb));
    std::vector<std::vector<double>> u(sec.zetas.size(), std::vector<double>(static_cast<std::size_t>(g.size())));
    for (int n = 2; n <= N; ++n) {
        std::vector<std::vector<double>> per_h(sec.zetas.size());
        for (const Index& h : unit_offsets(s, n, N, 1)) {
            double dist = s.norm(g.point(h));
            for (std::int64_t xf = 0; xf < g.size(); ++xf) {
                numerator(g.unflatten(xf), h, diff.data());
                for (std::size_t z = 0; z < sec.zetas.size(); ++z)
                    u[z][static_cast<std::size_t>(xf)] = sector_abs(diff.data(), sec.members[z]) / std::pow(dist, gamma - sec.zetas[z]);
            }
            for (std::size_t z = 0; z < sec.zetas.size(); ++z) per_h[z].push_back(lpn_norm(u[z], s, N, p));
        }
        for (std::size_t z = 0; z < sec.zetas.size(); ++z) terms[z][static_cast<std::size_t>(n)] = qsum(per_h[z], q);
    }
    return terms;
}

void finish(DNormReport& r, double q, int last) {
    r.total = 0;
    for (std::size_t z = 0; z < r.zetas.size(); ++z) {
        r.total += r.local[z] + lq_norm(r.translation[z], q);
        if (!r.consistency.empty()) r.total += lq_norm(r.consistency[z], q);
        r.truncation.push_back(tail_share(r.translation[z], last, q));
    }
}

}  // namespace

ModelledDistribution taylor_lift(const Model& M, double gamma,
                                 const std::function<double(const MultiIndex&, const Point&)>& dF) {
    const auto& st = M.structure();
    check_gamma(st, gamma);
    ModelledDistribution f(M, gamma);
    const Grid& g = M.grid();
    for (std::int64_t x = 0; x < g.size(); ++x) {
        Point px = g.point(g.unflatten(x));
        for (int t = 0; t < st.size(); ++t)
            if (st[t].polynomial() && st[t].hom < gamma)
                f.at(x)[t] = dF(st[t].k, px) / mi_factorial(st[t].k, st.scaling().dim());
    }
    return f;
}

ModelledDistribution constant_md(const Model& M, double gamma, int tau, double c) {
    check_gamma(M.structure(), gamma);
    require(tau >= 0 && tau < M.size() && M.structure()[tau].hom < gamma, "constant_md: symbol out of range");
    ModelledDistribution f(M, gamma);
    for (std::int64_t x = 0; x < M.grid().size(); ++x) f.at(x)[tau] = c;
    return f;
}

ModelledDistribution project_below(const ModelledDistribution& f, const Model& M, double gp) {
    require(gp < f.gamma, "project_below: gamma' must be below gamma");
    check_gamma(M.structure(), gp);
    ModelledDistribution r = f;
    r.gamma = gp;
    for (std::int64_t x = 0; x < M.grid().size(); ++x)
        for (int t = 0; t < M.size(); ++t)
            if (M.structure()[t].hom >= gp) r.at(x)[t] = 0.0;
    return r;
}

DNormReport d_norm(const ModelledDistribution& f, const Model& M, double p, double q) {
    check_pair(f, M);
    require(p >= 1 && q >= 1, "d_norm: p and q must be >= 1");
    auto sec = sectors_below(M.structure(), f.gamma);
    const Grid& g = M.grid();
    const int nb = M.size(), N = M.levels();
    DNormReport r;
    r.zetas = sec.zetas;
    std::vector<double> u(static_cast<std::size_t>(g.size()));
    for (std::size_t z = 0; z < sec.zetas.size(); ++z) {
        for (std::int64_t x = 0; x < g.size(); ++x) u[static_cast<std::size_t>(x)] = sector_abs(f.at(x), sec.members[z]);
        r.local.push_back(lpn_norm(u, M.structure().scaling(), N, p));
    }
    std::vector<double> tmp(static_cast<std::size_t>(nb));
    r.translation = translation_terms(M, sec, f.gamma, p, q, [&](const Index& x, const Index& h, double* out) {
        Index y = add(x, h);
        M.apply_gamma(y, x, f.at(g.flatten(x)), tmp.data());
        const double* fy = f.at(g.flatten(y));
        for (int t = 0; t < nb; ++t) out[t] = fy[t] - tmp[static_cast<std::size_t>(t)];
    });
    finish(r, q, N);
    return r;
}

DNormReport md_distance(const ModelledDistribution& f, const Model& M, const ModelledDistribution& gd, const Model& Mg,
                        double p, double q) {
    check_pair(f, M);
    check_pair(gd, Mg);
    require(M.size() == Mg.size() && M.levels() == Mg.levels() && f.gamma == gd.gamma,
            "md_distance: structure mismatch");
    for (int t = 0; t < M.size(); ++t)
        require(M.structure()[t].name == Mg.structure()[t].name, "md_distance: structure mismatch");
    auto sec = sectors_below(M.structure(), f.gamma);
    const Grid& g = M.grid();
    const int nb = M.size(), N = M.levels();
    DNormReport r;
    r.zetas = sec.zetas;
    std::vector<double> u(static_cast<std::size_t>(g.size()));
    for (std::size_t z = 0; z < sec.zetas.size(); ++z) {
        for (std::int64_t x = 0; x < g.size(); ++x) {
            double m = 0;
            for (int t : sec.members[z]) m = std::max(m, std::abs(f.at(x)[t] - gd.at(x)[t]));
            u[static_cast<std::size_t>(x)] = m;
        }
        r.local.push_back(lpn_norm(u, M.structure().scaling(), N, p));
    }
    std::vector<double> a(static_cast<std::size_t>(nb)), b(static_cast<std::size_t>(nb));
    r.translation = translation_terms(M, sec, f.gamma, p, q, [&](const Index& x, const Index& h, double* out) {
        Index y = add(x, h);
        std::int64_t fx = g.flatten(x), fy = g.flatten(y);
        M.apply_gamma(y, x, f.at(fx), a.data());
        Mg.apply_gamma(y, x, gd.at(fx), b.data());
        for (int t = 0; t < nb; ++t)
            out[t] = f.at(fy)[t] - gd.at(fy)[t] - a[static_cast<std::size_t>(t)] + b[static_cast<std::size_t>(t)];
    });
    finish(r, q, N);
    return r;
}

AveragedMD average(const ModelledDistribution& f, const Model& M) {
    check_pair(f, M);
    const Scaling& s = M.structure().scaling();
    const int N = M.levels(), nb = M.size(), d = s.dim();
    const Grid& gN = M.grid();
    AveragedMD fb;
    fb.gamma = f.gamma;
    fb.size = nb;
    fb.levels.resize(static_cast<std::size_t>(N + 1));
    std::vector<double> tmp(static_cast<std::size_t>(nb));
    for (int n = 0; n < N; ++n) {
        Grid gn(s, n);
        Index lo{}, hi{};
        double count = 1;
        for (int i = 0; i < d; ++i) {
            std::int64_t r = std::int64_t{1} << ((N - n) * s[i]);
            lo[static_cast<std::size_t>(i)] = -r;
            hi[static_cast<std::size_t>(i)] = r;
            count *= static_cast<double>(2 * r + 1);
        }
        auto& out = fb.levels[static_cast<std::size_t>(n)];
        out.assign(static_cast<std::size_t>(gn.size() * nb), 0.0);
        for (std::int64_t xn = 0; xn < gn.size(); ++xn) {
            Index x = gn.embed_into(gN, gn.unflatten(xn));
            double* acc = out.data() + xn * nb;
            for_each_offset(d, lo, hi, [&](const Index& j) {
                Index y = add(x, j);
                M.apply_gamma(x, y, f.at(gN.flatten(y)), tmp.data());
                for (int t = 0; t < nb; ++t) acc[t] += tmp[static_cast<std::size_t>(t)];
            });
            for (int t = 0; t < nb; ++t) acc[t] /= count;
        }
    }
    fb.levels[static_cast<std::size_t>(N)] = f.values;
    return fb;
}

namespace {

void check_avg(const AveragedMD& fb, const Model& M) {
    require(fb.finest() == M.levels() && fb.size == M.size(), "averaged distribution does not match the model");
    check_gamma(M.structure(), fb.gamma);
    for (int n = 0; n <= fb.finest(); ++n)
        require(static_cast<std::int64_t>(fb.levels[static_cast<std::size_t>(n)].size()) ==
                    Grid(M.structure().scaling(), n).size() * fb.size,
                "averaged distribution: level size mismatch");
}

}  // namespace

DNormReport dbar_norm(const AveragedMD& fb, const Model& M, double p, double q) {
    check_avg(fb, M);
    require(p >= 1 && q >= 1, "dbar_norm: p and q must be >= 1");
    const Scaling& s = M.structure().scaling();
    const int N = M.levels(), nb = M.size(), d = s.dim();
    const Grid& gN = M.grid();
    auto sec = sectors_below(M.structure(), fb.gamma);
    const std::size_t nz = sec.zetas.size();
    DNormReport r;
    r.zetas = sec.zetas;
    r.translation.assign(nz, std::vector<double>(static_cast<std::size_t>(N + 1), 0.0));
    r.consistency.assign(nz, std::vector<double>(static_cast<std::size_t>(N), 0.0));
    r.combined.assign(nz, std::vector<double>(static_cast<std::size_t>(N), 0.0));
    std::vector<double> tmp(static_cast<std::size_t>(nb));
    {
        const auto& f0 = fb.levels[0];
        for (std::size_t z = 0; z < nz; ++z) {
            std::vector<double> u{sector_abs(f0.data(), sec.members[z])};
            r.local.push_back(lpn_norm(u, s, 0, p));
        }
    }
    for (int n = 0; n <= N; ++n) {
        Grid gn(s, n);
        const auto& fn = fb.levels[static_cast<std::size_t>(n)];
        std::vector<std::vector<double>> u(nz, std::vector<double>(static_cast<std::size_t>(gn.size())));
        // translation over E_n, n >= 2
        if (n >= 2) {
            std::vector<std::vector<double>> per_h(nz);
            Index lo{}, hi{};
            for (int i = 0; i < d; ++i) {
                lo[static_cast<std::size_t>(i)] = -1;
                hi[static_cast<std::size_t>(i)] = 1;
            }
            for_each_offset(d, lo, hi, [&](const Index& h) {
                bool zero = true;
                for (int i = 0; i < d; ++i) zero = zero && h[static_cast<std::size_t>(i)] == 0;
                if (zero) return;
                for (std::int64_t xf = 0; xf < gn.size(); ++xf) {
                    Index x = gn.unflatten(xf), y = add(x, h);
                    M.apply_gamma(gn.embed_into(gN, y), gn.embed_into(gN, x), fn.data() + xf * nb, tmp.data());
                    const double* fy = fn.data() + gn.flatten(y) * nb;
                    for (int t = 0; t < nb; ++t) tmp[static_cast<std::size_t>(t)] = fy[t] - tmp[static_cast<std::size_t>(t)];
                    for (std::size_t z = 0; z < nz; ++z)
                        u[z][static_cast<std::size_t>(xf)] = sector_abs(tmp.data(), sec.members[z]);
                }
                for (std::size_t z = 0; z < nz; ++z)
                    per_h[z].push_back(lpn_norm(u[z], s, n, p));
            });
            for (std::size_t z = 0; z < nz; ++z) {
                double w = std::pow(2.0, n * (fb.gamma - sec.zetas[z]));
                for (auto& v : per_h[z]) v *= w;
                r.translation[z][static_cast<std::size_t>(n)] = qsum(per_h[z], q);
            }
        }
        if (n == N) break;
        Grid gn1(s, n + 1);
        const auto& fn1 = fb.levels[static_cast<std::size_t>(n + 1)];
        // consistency
        for (std::int64_t xf = 0; xf < gn.size(); ++xf) {
            std::int64_t x1 = gn1.flatten(gn.embed_into(gn1, gn.unflatten(xf)));
            for (int t = 0; t < nb; ++t) tmp[static_cast<std::size_t>(t)] = fn[static_cast<std::size_t>(xf * nb + t)] - fn1[static_cast<std::size_t>(x1 * nb + t)];
            for (std::size_t z = 0; z < nz; ++z) u[z][static_cast<std::size_t>(xf)] = sector_abs(tmp.data(), sec.members[z]);
        }
        for (std::size_t z = 0; z < nz; ++z)
            r.consistency[z][static_cast<std::size_t>(n)] = lpn_norm(u[z], s, n, p) * std::pow(2.0, n * (fb.gamma - sec.zetas[z]));
        // combined: h in E^C_{n+1} with C = 2, plus h = 0
        Index lo{}, hi{};
        for (int i = 0; i < d; ++i) {
            lo[static_cast<std::size_t>(i)] = -(std::int64_t{1} << s[i]);
            hi[static_cast<std::size_t>(i)] = std::int64_t{1} << s[i];
        }
        for_each_offset(d, lo, hi, [&](const Index& h) {
            for (std::int64_t xf = 0; xf < gn.size(); ++xf) {
                Index x1 = gn.embed_into(gn1, gn.unflatten(xf)), y1 = add(x1, h);
                M.apply_gamma(gn1.embed_into(gN, x1), gn1.embed_into(gN, y1), fn1.data() + gn1.flatten(y1) * nb, tmp.data());
                for (int t = 0; t < nb; ++t) tmp[static_cast<std::size_t>(t)] = fn[static_cast<std::size_t>(xf * nb + t)] - tmp[static_cast<std::size_t>(t)];
                for (std::size_t z = 0; z < nz; ++z) u[z][static_cast<std::size_t>(xf)] = sector_abs(tmp.data(), sec.members[z]);
            }
            for (std::size_t z = 0; z < nz; ++z)
                r.combined[z][static_cast<std::size_t>(n)] += lpn_norm(u[z], s, n, p) * std::pow(2.0, n * (fb.gamma - sec.zetas[z]));
        });
    }
    finish(r, q, N);
    return r;
}

UnaverageResult unaverage(const AveragedMD& fb, const Model& M, double p, const ModelledDistribution* reference) {
    check_avg(fb, M);
    if (reference) check_pair(*reference, M);
    const Scaling& s = M.structure().scaling();
    const int N = M.levels(), nb = M.size();
    const Grid& gN = M.grid();
    auto sec = sectors_below(M.structure(), fb.gamma);
    const std::size_t nz = sec.zetas.size();
    UnaverageResult res;
    res.increments.assign(nz, {});
    if (reference) res.errors.assign(nz, {});
    ModelledDistribution prev(M, fb.gamma), cur(M, fb.gamma);
    std::vector<double> u(static_cast<std::size_t>(gN.size()));
    auto measure = [&](const ModelledDistribution& a, const ModelledDistribution& b, std::size_t z) {
        for (std::int64_t x = 0; x < gN.size(); ++x) {
            double m = 0;
            for (int t : sec.members[z]) m = std::max(m, std::abs(a.at(x)[t] - b.at(x)[t]));
            u[static_cast<std::size_t>(x)] = m;
        }
        return lpn_norm(u, s, N, p);
    };
    for (int n = 0; n <= N; ++n) {
        Grid gn(s, n);
        const auto& fn = fb.levels[static_cast<std::size_t>(n)];
        for (std::int64_t xf = 0; xf < gN.size(); ++xf) {
            Index x = gN.unflatten(xf);
            Index xn = gn.nearest_from(gN, x);
            M.apply_gamma(x, gn.embed_into(gN, xn), fn.data() + gn.flatten(xn) * nb, cur.at(xf));
        }
        for (std::size_t z = 0; z < nz; ++z) {
            if (n > 0) res.increments[z].push_back(measure(cur, prev, z));
            if (reference) res.errors[z].push_back(measure(cur, *reference, z));
        }
        std::swap(prev, cur);
    }
    res.f = prev;
    for (std::size_t z = 0; z < nz; ++z) {
        std::vector<double> xs, ys;
        const auto& inc = res.increments[z];
        for (std::size_t i = inc.size() >= 4 ? inc.size() - 4 : 0; i < inc.size(); ++i)
            if (inc[i] > 0) {
                xs.push_back(static_cast<double>(i));
                ys.push_back(-std::log2(inc[i]));
            }
        double e = xs.size() >= 2 ? slope_fit(xs, ys) : std::numeric_limits<double>::infinity();
        res.decay.push_back(e);
        if (e < 0) res.divergent = true;
    }
    return res;
}

PropagationReport check_local_propagation(const AveragedMD& fb, const Model& M, double p, double q, double Kmax) {
    auto dn = dbar_norm(fb, M, p, q);
    const Scaling& s = M.structure().scaling();
    auto sec = sectors_below(M.structure(), fb.gamma);
    PropagationReport r;
    r.zetas = dn.zetas;
    for (std::size_t z = 0; z < sec.zetas.size(); ++z) {
        double lhs = 0;
        for (int n = 0; n <= fb.finest(); ++n) {
            Grid gn(s, n);
            std::vector<double> u(static_cast<std::size_t>(gn.size()));
            const auto& fn = fb.levels[static_cast<std::size_t>(n)];
            for (std::int64_t x = 0; x < gn.size(); ++x) u[static_cast<std::size_t>(x)] = sector_abs(fn.data() + x * fb.size, sec.members[z]);
            lhs = std::max(lhs, lpn_norm(u, s, n, p));
        }
        double comb = 0;
        for (std::size_t w = z; w < sec.zetas.size(); ++w) comb += lq_norm(dn.combined[w], q);
        r.lhs.push_back(lhs);
        r.level0.push_back(dn.local[z]);
        r.combined.push_back(comb);
        double excess = lhs - dn.local[z];
        if (excess > 1e-12 * std::max(1.0, lhs))
            r.K = std::max(r.K, comb > 0 ? excess / comb : std::numeric_limits<double>::infinity());
    }
    r.holds = r.K <= Kmax;
    return r;
}

void DNormReport::write_csv(std::ostream& os) const {
    os << "zeta,n,term_kind,value\n";
    auto row = [&](double z, int n, const char* kind, double v) { os << z << ',' << n << ',' << kind << ',' << v << '\n'; };
    for (std::size_t z = 0; z < zetas.size(); ++z) {
        row(zetas[z], 0, "local", local[z]);
        for (std::size_t n = 0; n < translation[z].size(); ++n)
            if (translation[z][n] != 0.0) row(zetas[z], static_cast<int>(n), "translation", translation[z][n]);
        if (!consistency.empty())
            for (std::size_t n = 0; n < consistency[z].size(); ++n) row(zetas[z], static_cast<int>(n), "consistency", consistency[z][n]);
        if (!combined.empty())
            for (std::size_t n = 0; n < combined[z].size(); ++n) row(zetas[z], static_cast<int>(n), "combined", combined[z][n]);
        row(zetas[z], -1, "truncation_share", truncation[z]);
    }
    os << "all,-1,total," << total << '\n';
}

void write_md(std::ostream& os, const ModelledDistribution& f, const Model& M) {
    check_pair(f, M);
    const auto& st = M.structure();
    os.write("RSMD", 4);
    put_u32(os, 1);
    put_u32(os, static_cast<std::uint32_t>(st.scaling().dim()));
    for (int v : st.scaling().exponents()) put_u32(os, static_cast<std::uint32_t>(v));
    put_u32(os, static_cast<std::uint32_t>(f.levels));
    put_f64(os, f.gamma);
    put_u32(os, static_cast<std::uint32_t>(f.size));
    const std::int64_t n = M.grid().size();
    for (int t = 0; t < f.size; ++t) {
        const std::string& name = st[t].name;
        put_u32(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        for (std::int64_t x = 0; x < n; ++x) put_f64(os, f.at(x)[t]);
    }
}

ModelledDistribution read_md(std::istream& is, const Model& M) {
    char magic[4];
    require(is.read(magic, 4) && std::memcmp(magic, "RSMD", 4) == 0, "rsmd: bad magic");
    require(get_u32(is) == 1, "rsmd: unsupported version");
    const auto& st = M.structure();
    std::uint32_t d = get_u32(is);
    require(static_cast<int>(d) == st.scaling().dim(), "rsmd: dimension mismatch");
    for (std::uint32_t i = 0; i < d; ++i)
        require(static_cast<int>(get_u32(is)) == st.scaling()[static_cast<int>(i)], "rsmd: scaling mismatch");
    require(static_cast<int>(get_u32(is)) == M.levels(), "rsmd: level mismatch");
    double gamma = get_f64(is);
    require(static_cast<int>(get_u32(is)) == M.size(), "rsmd: basis size mismatch");
    ModelledDistribution f(M, gamma);
    const std::int64_t n = M.grid().size();
    for (int t = 0; t < f.size; ++t) {
        std::string name(get_u32(is), '\0');
        is.read(name.data(), static_cast<std::streamsize>(name.size()));
        require(name == st[t].name, "rsmd: symbol mismatch");
        for (std::int64_t x = 0; x < n; ++x) f.at(x)[t] = get_f64(is);
    }
    check_pair(f, M);
    return f;
}

}  // namespace rsb
