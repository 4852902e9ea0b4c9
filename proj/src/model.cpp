#include "rsb/model.hpp"

#include <algorithm>
#include <cmath>

#include "rsb/numerics.hpp"

namespace rsb {

Model::Model(Structure st, std::shared_ptr<const Wavelet> w, int N, int oversample)
    : st_(std::move(st)), w_(std::move(w)), N_(N), L_(oversample), grid_(st_.scaling(), N) {
    require(w_ != nullptr, "model: missing wavelet");
    require(N >= 1, "model: N must be >= 1");
    abs_.resize(static_cast<std::size_t>(st_.size()));
    int d = st_.scaling().dim();
    for (int tau = 0; tau < st_.size(); ++tau) {
        const Symbol& sy = st_[tau];
        if (!sy.polynomial()) continue;
        for (int i = 0; i < d; ++i) maxdeg_ = std::max(maxdeg_, sy.k[static_cast<std::size_t>(i)]);
        for (int sigma = 0; sigma < st_.size(); ++sigma) {
            const Symbol& lo = st_[sigma];
            if (!lo.polynomial() || !mi_leq(lo.k, sy.k, d)) continue;
            PolyEntry e{sigma, tau, 1.0, {}};
            for (int i = 0; i < d; ++i) {
                auto ui = static_cast<std::size_t>(i);
                e.c *= binomial(sy.k[ui], lo.k[ui]);
                e.e[ui] = sy.k[ui] - lo.k[ui];
            }
            poly_.push_back(e);
        }
    }
}

Model Model::polynomial(const Scaling& s, double gamma, std::shared_ptr<const Wavelet> w, int N) {
    return Model(Structure::polynomial(s, gamma), std::move(w), N);
}

Model Model::noise(double alpha, const Pyramid& xi, double gamma, std::shared_ptr<const Wavelet> w) {
    require(alpha < 0 && gamma >= 0, "noise model: need alpha < 0 <= gamma");
    auto st = Structure::noise(xi.scaling, alpha, gamma);
    require(std::abs(gamma - alpha) > 1e-9, "noise model: gamma coincides with a homogeneity");
    for (const auto& k : multi_indices_below(xi.scaling, gamma + 1.0))
        require(std::abs(gamma - xi.scaling.degree(k)) > 1e-9, "noise model: gamma coincides with a homogeneity");
    Model M(st, std::move(w), xi.levels);
    M.set_abstract(st.find("Xi"), xi);
    return M;
}

void Model::set_abstract(int tau, const Pyramid& D, std::vector<TaylorTable> taylor) {
    require(tau >= 0 && tau < st_.size() && !st_[tau].polynomial(), "model: not an abstract symbol");
    require(D.scaling == st_.scaling() && D.levels == N_, "model: pyramid incompatible with the grid");
    bool shape = D.base.size() == 1 && D.details.size() == static_cast<std::size_t>(N_);
    for (int n = 0; shape && n < N_; ++n)
        shape = D.details[static_cast<std::size_t>(n)].size() == static_cast<std::size_t>(D.num_psi() * D.level_size(n));
    require(shape, "model: pyramid storage does not match its levels");
    auto a = std::make_shared<AbstractData>();
    a->D = D;
    for (int n = 0; n <= N_; ++n) a->level.push_back(synthesize_level(D, n, *w_));
    for (auto& t : taylor) {
        require(static_cast<std::int64_t>(t.t.size()) == grid_.size(), "model: Taylor table size mismatch");
        for (int i = 0; i < st_.scaling().dim(); ++i) maxdeg_ = std::max(maxdeg_, t.m[static_cast<std::size_t>(i)]);
    }
    a->taylor = std::move(taylor);
    a->dual = std::make_shared<DualSamples>(a->level.back(), st_.scaling(), N_, *w_, L_);
    abs_[static_cast<std::size_t>(tau)] = a;
}

Model Model::with_noise(const Pyramid& xi) const {
    Model M = *this;
    for (int tau = 0; tau < st_.size(); ++tau)
        if (st_[tau].kind == SymbolKind::Noise) M.set_abstract(tau, xi);
    return M;
}

Model Model::with_gamma_perturbation(const GammaPerturbation& g) const {
    require(g.out >= 0 && g.out < size() && g.in >= 0 && g.in < size(), "model: perturbation index out of range");
    Model M = *this;
    M.pert_.push_back(g);
    return M;
}

const AbstractData& Model::abstract(int tau) const {
    require(has_abstract(tau), "model: no data for symbol " + st_[tau].name);
    return *abs_[static_cast<std::size_t>(tau)];
}

void Model::gamma(const Index& x, const Index& y, std::vector<double>& G) const {
    const int nb = size(), d = st_.scaling().dim();
    G.assign(static_cast<std::size_t>(nb * nb), 0.0);
    Point px = coords(x), py = coords(y), h{};
    std::array<std::array<double, 32>, kMaxDim> hp{};
    for (int i = 0; i < d; ++i) {
        auto ui = static_cast<std::size_t>(i);
        h[ui] = px[ui] - py[ui];
        hp[ui][0] = 1.0;
        for (int p = 1; p <= maxdeg_ && p < 32; ++p) hp[ui][static_cast<std::size_t>(p)] = hp[ui][static_cast<std::size_t>(p - 1)] * h[ui];
    }
    auto hpow = [&](const MultiIndex& e) {
        double r = 1.0;
        for (int i = 0; i < d; ++i) r *= hp[static_cast<std::size_t>(i)][static_cast<std::size_t>(e[static_cast<std::size_t>(i)])];
        return r;
    };
    for (const auto& e : poly_) G[static_cast<std::size_t>(e.out * nb + e.in)] += e.c * hpow(e.e);
    std::int64_t fx = grid_.flatten(x), fy = grid_.flatten(y);
    for (int tau = 0; tau < nb; ++tau) {
        if (st_[tau].polynomial()) continue;
        G[static_cast<std::size_t>(tau * nb + tau)] = 1.0;
        if (!has_abstract(tau)) continue;
        const auto& tay = abs_[static_cast<std::size_t>(tau)]->taylor;
        for (const auto& tm : tay) {
            int sigma = st_.find_poly(tm.m);
            if (sigma < 0) continue;
            double c = tm.t[static_cast<std::size_t>(fx)] / mi_factorial(tm.m, d);
            for (const auto& tk : tay) {
                if (!mi_leq(tm.m, tk.m, d)) continue;
                MultiIndex e{};
                double b = 1.0;
                for (int i = 0; i < d; ++i) {
                    auto ui = static_cast<std::size_t>(i);
                    e[ui] = tk.m[ui] - tm.m[ui];
                    b *= binomial(tk.m[ui], tm.m[ui]);
                }
                c -= b * hpow(e) * tk.t[static_cast<std::size_t>(fy)] / mi_factorial(tk.m, d);
            }
            G[static_cast<std::size_t>(sigma * nb + tau)] += c;
        }
    }
    for (const auto& p : pert_) G[static_cast<std::size_t>(p.out * nb + p.in)] += p.eps * p.e(h);
}

void Model::apply_gamma(const Index& x, const Index& y, const double* in, double* out) const {
    thread_local std::vector<double> G;
    gamma(x, y, G);
    const int nb = size();
    for (int s = 0; s < nb; ++s) {
        double acc = 0;
        for (int t = 0; t < nb; ++t) acc += G[static_cast<std::size_t>(s * nb + t)] * in[t];
        out[s] = acc;
    }
}

std::vector<double> Model::father_pairing(int tau, int n) const {
    require(n >= 0 && n <= N_, "model: level out of range");
    const Scaling& s = st_.scaling();
    const Symbol& sy = st_[tau];
    if (sy.polynomial())
        return std::vector<double>(static_cast<std::size_t>(Grid(s, n).size()), father_monomial_pairing(*w_, s, n, sy.k));
    if (!has_abstract(tau)) return std::vector<double>(static_cast<std::size_t>(Grid(s, n).size()), 0.0);
    const auto& a = abstract(tau);
    std::vector<double> out = a.level[static_cast<std::size_t>(n)];
    for (const auto& tm : a.taylor) {
        double c = father_monomial_pairing(*w_, s, n, tm.m) / mi_factorial(tm.m, s.dim());
        auto t = restrict_to_level(tm.t, s, N_, n);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * t[i];
    }
    return out;
}

std::vector<double> Model::mother_pairing(int tau, int n, int psi) const {
    require(n >= 0 && n < N_, "model: level out of range");
    const Scaling& s = st_.scaling();
    const Symbol& sy = st_[tau];
    std::int64_t sz = Grid(s, n).size();
    if (sy.polynomial())
        return std::vector<double>(static_cast<std::size_t>(sz), mother_monomial_pairing(*w_, s, n, psi, sy.k));
    if (!has_abstract(tau)) return std::vector<double>(static_cast<std::size_t>(sz), 0.0);
    const auto& a = abstract(tau);
    const double* src = a.D.details[static_cast<std::size_t>(n)].data() + psi * sz;
    std::vector<double> out(src, src + sz);
    for (const auto& tm : a.taylor) {
        double c = mother_monomial_pairing(*w_, s, n, psi, tm.m) / mi_factorial(tm.m, s.dim());
        if (c == 0.0) continue;
        auto t = restrict_to_level(tm.t, s, N_, n);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * t[i];
    }
    return out;
}

std::vector<double> Model::test_pairing(int tau, const TestProfile& eta, int m) const {
    const Scaling& s = st_.scaling();
    const Symbol& sy = st_[tau];
    auto lam_pow = [&](const MultiIndex& k) { return std::ldexp(1.0, -m * s.degree(k)); };
    if (sy.polynomial())
        return std::vector<double>(static_cast<std::size_t>(grid_.size()), lam_pow(sy.k) * eta.moment(sy.k));
    if (!has_abstract(tau)) return std::vector<double>(static_cast<std::size_t>(grid_.size()), 0.0);
    const auto& a = abstract(tau);
    auto out = restrict_to_level(a.dual->correlate(sample_test_kernel(eta, a.dual->grid(), m)), s, a.dual->level(), N_);
    for (const auto& tm : a.taylor) {
        double c = lam_pow(tm.m) * eta.moment(tm.m) / mi_factorial(tm.m, s.dim());
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * tm.t[i];
    }
    return out;
}

double Model::polynomial_part(int tau, const Index& x, const Point& z) const {
    const int d = st_.scaling().dim();
    Point px = coords(x), dz{};
    for (int i = 0; i < d; ++i) dz[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] - px[static_cast<std::size_t>(i)];
    const Symbol& sy = st_[tau];
    if (sy.polynomial()) return monomial(dz, sy.k, d);
    if (!has_abstract(tau)) return 0.0;
    double acc = 0;
    std::int64_t fx = grid_.flatten(x);
    for (const auto& tm : abstract(tau).taylor)
        acc -= tm.t[static_cast<std::size_t>(fx)] / mi_factorial(tm.m, d) * monomial(dz, tm.m, d);
    return acc;
}

namespace {

int pair_level(const Scaling& s, int N, int max_points) {
    int L = 0;
    while (L < N && Grid(s, L + 1).size() <= max_points) ++L;
    return L;
}

// sup over pairs of |(Gamma_a - Gamma_b) tau|_beta / ||x - y||^{zeta - beta}
double gamma_sup(const Model& A, const Model* B, double gamma, const ModelNormOptions& opt) {
    const Structure& st = A.structure();
    const Scaling& s = st.scaling();
    const int N = A.levels(), nb = st.size(), d = s.dim();
    int Lg = pair_level(s, N, opt.max_points);
    Grid gL(s, Lg);
    Index lo{}, hi{};
    for (int i = 0; i < d; ++i) {
        hi[static_cast<std::size_t>(i)] = gL.extent(i);
        lo[static_cast<std::size_t>(i)] = -gL.extent(i);
    }
    std::vector<double> Ga, Gb;
    double best = 0;
    for (std::int64_t xi = 0; xi < gL.size(); ++xi) {
        Index x = gL.embed_into(A.grid(), gL.unflatten(xi));
        for_each_offset(d, lo, hi, [&](const Index& off) {
            bool zero = true;
            for (int i = 0; i < d; ++i) zero = zero && off[static_cast<std::size_t>(i)] == 0;
            if (zero) return;
            Index h = gL.embed_into(A.grid(), off), y{};
            for (int i = 0; i < kMaxDim; ++i) y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h[static_cast<std::size_t>(i)];
            A.gamma(x, y, Ga);
            if (B) {
                B->gamma(x, y, Gb);
                for (std::size_t i = 0; i < Ga.size(); ++i) Ga[i] -= Gb[i];
            } else {
                for (int t = 0; t < nb; ++t) Ga[static_cast<std::size_t>(t * nb + t)] -= 1.0;
            }
            double dist = s.norm(gL.point(off));
            for (int t = 0; t < nb; ++t) {
                double zeta = st[t].hom;
                if (zeta >= gamma) continue;
                for (int sg = 0; sg < nb; ++sg) {
                    double beta = st[sg].hom;
                    if (beta >= zeta) continue;
                    double v = std::abs(Ga[static_cast<std::size_t>(sg * nb + t)]) / std::pow(dist, zeta - beta);
                    best = std::max(best, v);
                }
            }
        });
    }
    // the unit diagonal contributes |Gamma tau|_zeta = |tau|_zeta = 1
    return B ? best : std::max(best, 1.0);
}

double pi_sup(const Model& A, const Model* B, int tau, double gamma, const Dictionary& dict) {
    const Structure& st = A.structure();
    double zeta = st[tau].hom;
    if (zeta >= gamma) return 0.0;
    double best = 0;
    for (int m = 0; m < A.levels(); ++m) {
        double lam = std::ldexp(1.0, -m);
        for (const auto& eta : dict.profiles()) {
            auto v = A.test_pairing(tau, eta, m);
            if (B) {
                auto w = B->test_pairing(tau, eta, m);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= w[i];
            }
            double mx = 0;
            for (double a : v) mx = std::max(mx, std::abs(a));
            best = std::max(best, mx / std::pow(lam, zeta));
        }
    }
    return best;
}

}  // namespace

ModelNorms model_norms(const Model& M, double gamma, const Dictionary& dict, const ModelNormOptions& opt) {
    ModelNorms r;
    for (int tau = 0; tau < M.size(); ++tau) {
        double v = pi_sup(M, nullptr, tau, gamma, dict);
        r.pi_per_symbol.push_back(v);
        r.pi = std::max(r.pi, v);
    }
    r.gamma = gamma_sup(M, nullptr, gamma, opt);
    return r;
}

ModelNorms model_difference(const Model& A, const Model& B, double gamma, const Dictionary& dict,
                            const ModelNormOptions& opt) {
    require(A.size() == B.size() && A.levels() == B.levels(), "model difference: structure mismatch");
    for (int i = 0; i < A.size(); ++i)
        require(A.structure()[i].name == B.structure()[i].name, "model difference: structure mismatch");
    ModelNorms r;
    for (int tau = 0; tau < A.size(); ++tau) {
        double v = pi_sup(A, &B, tau, gamma, dict);
        r.pi_per_symbol.push_back(v);
        r.pi = std::max(r.pi, v);
    }
    r.gamma = gamma_sup(A, &B, gamma, opt);
    return r;
}

double ValidationReport::max_violation() const {
    return std::max({triangular, group, identity, compat, top_sector});
}

ValidationReport validate_model(const Model& M, int samples, std::uint64_t seed) {
    const Structure& st = M.structure();
    const Scaling& s = st.scaling();
    const int nb = st.size(), d = s.dim();
    const Grid& g = M.grid();
    Rng rng(seed);
    auto rand_index = [&]() {
        Index k{};
        for (int i = 0; i < d; ++i)
            k[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(g.extent(i)));
        return k;
    };
    // a point within s-distance 1/2 of x, lifted
    auto near = [&](const Index& x) {
        Index k = x;
        for (int i = 0; i < d; ++i) {
            auto ui = static_cast<std::size_t>(i);
            std::int64_t r = g.extent(i) / 2;
            k[ui] += static_cast<std::int64_t>(std::floor(rng.symmetric() * static_cast<double>(r)));
        }
        return k;
    };
    double top = st.homogeneities().back();
    ValidationReport rep;
    std::vector<double> Gxy, Gyz, Gxz, Gxx;
    for (int it = 0; it < samples; ++it) {
        Index x = rand_index(), y = near(x), z = near(y);
        M.gamma(x, y, Gxy);
        M.gamma(y, z, Gyz);
        M.gamma(x, z, Gxz);
        M.gamma(x, x, Gxx);
        double scale = 1.0;
        for (double v : Gxy) scale = std::max(scale, std::abs(v));
        for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b) {
                auto ab = static_cast<std::size_t>(a * nb + b);
                double e = Gxy[ab];
                if (a == b)
                    rep.triangular = std::max(rep.triangular, std::abs(e - 1.0));
                else if (st[a].hom >= st[b].hom - 1e-12)
                    rep.triangular = std::max(rep.triangular, std::abs(e));
                if (a != b && std::abs(st[a].hom - top) < 1e-12) rep.top_sector = std::max(rep.top_sector, std::abs(e));
                rep.identity = std::max(rep.identity, std::abs(Gxx[ab] - (a == b ? 1.0 : 0.0)));
                double prod = 0, mag = 1.0;
                for (int c = 0; c < nb; ++c) {
                    double t = Gxy[static_cast<std::size_t>(a * nb + c)] * Gyz[static_cast<std::size_t>(c * nb + b)];
                    prod += t;
                    mag = std::max(mag, std::abs(t));
                }
                rep.group = std::max(rep.group, std::abs(prod - Gxz[ab]) / mag);
            }
        // Pi_x Gamma_{x,y} tau = Pi_y tau, compared on the polynomial parts at a nearby point
        Point zp = M.coords(near(x));
        for (int tau = 0; tau < nb; ++tau) {
            double lhs = 0, mag = 1.0;
            for (int sg = 0; sg < nb; ++sg) {
                double c = Gxy[static_cast<std::size_t>(sg * nb + tau)];
                if (c == 0.0) continue;
                if (!st[sg].polynomial() && sg != tau) {
                    rep.compat = std::max(rep.compat, std::abs(c));
                    continue;
                }
                double t = c * M.polynomial_part(sg, x, zp);
                lhs += t;
                mag = std::max(mag, std::abs(t));
            }
            double rhs = M.polynomial_part(tau, y, zp);
            mag = std::max(mag, std::abs(rhs));
            rep.compat = std::max(rep.compat, std::abs(lhs - rhs) / mag);
        }
    }
    return rep;
}

}  // namespace rsb
