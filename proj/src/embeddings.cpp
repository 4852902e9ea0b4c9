#include "rsb/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "rsb/besov.hpp"
#include "rsb/numerics.hpp"
#include "rsb/reconstruction.hpp"

namespace rsb {

namespace {

double inv(double p) { return is_inf(p) ? 0.0 : 1.0 / p; }

double critical_target(const EmbeddingCase& c, const Scaling& s) {
    return c.gamma - s.total() * (inv(c.p) - inv(c.p_t));
}

}  // namespace

EllEmbed ell_embed(const std::vector<double>& u, const Scaling& s, int n, double p, double delta, double pt,
                   double delta_t) {
    require(p >= 1 && pt >= p, "ell_embed: need 1 <= p <= p~");
    require(delta > 0, "ell_embed: delta must be positive");
    require(delta_t <= delta - s.total() * (inv(p) - inv(pt)) + 1e-12, "ell_embed: delta~ exceeds delta - |s|(1/p - 1/p~)");
    std::vector<double> a(u.size()), b(u.size());
    double wt = std::pow(2.0, n * delta_t), w = std::pow(2.0, n * delta);
    for (std::size_t i = 0; i < u.size(); ++i) {
        a[i] = u[i] * wt;
        b[i] = u[i] * w;
    }
    return {lpn_norm(a, s, n, pt), lpn_norm(b, s, n, p)};
}

void check_case(const EmbeddingCase& c, const Structure& st) {
    for (double v : {c.p, c.q, c.p_t, c.q_t}) require(v >= 1, "embedding: exponents must be >= 1");
    require(c.gamma > 0 && c.gamma_t > 0, "embedding: gamma and gamma' must be positive");
    check_gamma(st, c.gamma);
    check_gamma(st, c.gamma_t);
    const std::string tag = "embedding case " + std::to_string(c.id) + ": ";
    switch (c.id) {
        case 1:
            require(c.q_t > c.q && c.p_t == c.p && c.gamma_t == c.gamma, tag + "needs q' > q, p' = p, gamma' = gamma");
            break;
        case 2:
            require(c.q_t <= c.q && c.p_t == c.p && c.gamma_t < c.gamma, tag + "needs q' <= q, p' = p, gamma' < gamma");
            break;
        case 3:
            require(c.q_t == c.q && c.p_t < c.p && c.gamma_t == c.gamma, tag + "needs q' = q, p' < p, gamma' = gamma");
            break;
        case 4: {
            require(c.q_t == c.q && c.p_t > c.p, tag + "needs q' = q, p' > p");
            double crit = critical_target(c, st.scaling());
            if (c.gamma_t < crit - 1e-12) break;
            require(std::abs(c.gamma_t - crit) <= 1e-12, tag + "gamma' above gamma - |s|(1/p - 1/p')");
            for (double h : st.homogeneities())
                require(h < crit - 1e-12 || h >= c.gamma, tag + "critical gamma' needs no homogeneity in [gamma', gamma)");
            break;
        }
        default:
            throw PreconditionError("embedding: case id must be 1..4");
    }
}

AveragedMD restrict_below(const AveragedMD& fb, const Model& M, double gamma_t) {
    AveragedMD r = fb;
    r.gamma = gamma_t;
    const auto& st = M.structure();
    for (auto& lv : r.levels)
        for (std::size_t x = 0; x < lv.size() / static_cast<std::size_t>(r.size); ++x)
            for (int t = 0; t < r.size; ++t)
                if (st[t].hom >= gamma_t) lv[x * static_cast<std::size_t>(r.size) + static_cast<std::size_t>(t)] = 0.0;
    return r;
}

EmbedReport embed_check(const AveragedMD& fb, const Model& M, const EmbeddingCase& c) {
    require(std::abs(fb.gamma - c.gamma) < 1e-12, "embed_check: averaged distribution has a different gamma");
    check_case(c, M.structure());
    EmbedReport r;
    r.c = c;
    r.N = M.levels();
    r.source = dbar_norm(fb, M, c.p, c.q).total;
    require(std::isfinite(r.source), "embed_check: source norm is not finite");
    r.target = dbar_norm(restrict_below(fb, M, c.gamma_t), M, c.p_t, c.q_t).total;
    r.ratio = r.source > 0 ? r.target / r.source : 0.0;
    if (c.id == 4) {
        const auto& st = M.structure();
        const Scaling& s = st.scaling();
        std::vector<double> zs;
        for (double h : st.homogeneities())
            if (h < c.gamma) zs.push_back(h);
        std::sort(zs.begin(), zs.end(), std::greater<>());
        zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
        for (double z : zs) {
            LadderRung rung;
            rung.zeta = z;
            double ip = inv(c.p) - (c.gamma - z) / s.total();
            rung.p_zeta = ip <= 0 ? kInf : 1.0 / ip;
            for (int n = 0; n <= fb.finest(); ++n) {
                const auto& lv = fb.levels[static_cast<std::size_t>(n)];
                std::vector<double> u(lv.size() / static_cast<std::size_t>(fb.size));
                for (std::size_t x = 0; x < u.size(); ++x) u[x] = st.sector_norm(lv.data() + x * static_cast<std::size_t>(fb.size), z);
                rung.sup_norm = std::max(rung.sup_norm, lpn_norm(u, s, n, rung.p_zeta));
            }
            r.ladder.push_back(rung);
        }
    }
    return r;
}

void EmbedReport::write_header(std::ostream& os) { os << "case,gamma,p,q,gamma',p',q',N,ratio\n"; }

void EmbedReport::write_row(std::ostream& os) const {
    os << c.id << ',' << c.gamma << ',' << c.p << ',' << c.q << ',' << c.gamma_t << ',' << c.p_t << ',' << c.q_t << ','
       << N << ',' << ratio << '\n';
}

AveragedMD random_lifted(const Model& M, double gamma, std::uint64_t seed) {
    // the lift sees the wavelet shape itself at every scale
    require(Wavelet::holder_exponent(M.wavelet().order()) > gamma,
            "random_lifted: wavelet order too low for gamma (needs Hoelder exponent above gamma)");
    auto xi = synthesize_random_besov(M.structure().scaling(), M.levels(), gamma + 0.25, seed);
    auto lf = lift(xi, M, gamma);
    return average(lf.f, M);
}

AveragedMD random_jet(const Model& M, double gamma, std::uint64_t seed, int modes) {
    const Scaling& s = M.structure().scaling();
    const int d = s.dim();
    struct Mode {
        Index m;
        double a, phase;
    };
    std::vector<Mode> ms;
    Rng rng(seed);
    Index lo{}, hi{};
    for (int i = 0; i < d; ++i) {
        lo[static_cast<std::size_t>(i)] = -modes;
        hi[static_cast<std::size_t>(i)] = modes;
    }
    const double twopi = 2.0 * std::acos(-1.0);
    for_each_offset(d, lo, hi, [&](const Index& m) {
        double norm = 0;
        for (int i = 0; i < d; ++i) norm = std::max(norm, std::abs(static_cast<double>(m[static_cast<std::size_t>(i)])));
        double a = rng.symmetric(), ph = twopi * rng.uniform();
        if (norm == 0) return;
        ms.push_back({m, a * std::pow(norm, -gamma - 1.0), ph});
    });
    auto f = taylor_lift(M, gamma, [&](const MultiIndex& k, const Point& x) {
        int absk = 0;
        for (int i = 0; i < d; ++i) absk += k[static_cast<std::size_t>(i)];
        double acc = 0;
        for (const auto& md : ms) {
            double th = md.phase, c = md.a;
            for (int i = 0; i < d; ++i) {
                auto ui = static_cast<std::size_t>(i);
                double w = twopi * static_cast<double>(md.m[ui]);
                th += w * x[ui];
                c *= ipow(w, k[ui]);
            }
            acc += c * std::cos(th + 0.5 * absk * std::acos(-1.0));
        }
        return acc;
    });
    return average(f, M);
}

}  // namespace rsb
