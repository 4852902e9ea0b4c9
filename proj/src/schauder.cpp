#include "rsb/schauder.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rsb/bspline.hpp"
#include "rsb/numerics.hpp"

namespace rsb {

namespace {

constexpr int kBumpOrder = 16;

double theta(double v) { return SmoothStep{12}.deriv(0, 2.0 * v - 1.0); }

double rho_deriv(const MultiIndex& k, const Point& x, int d) {
    CenteredBump b{kBumpOrder};
    double r = 1.0;
    for (int i = 0; i < d && r != 0.0; ++i) r *= b.deriv(k[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]);
    return r;
}

double rho_moment(const MultiIndex& a, int d) {
    CenteredBump b{kBumpOrder};
    double r = 1.0;
    for (int i = 0; i < d; ++i) r *= b.moment(a[static_cast<std::size_t>(i)]);
    return r;
}

// composite 16-point Gauss-Legendre nodes on [-1, 1]
void gl_nodes(int pieces, std::vector<double>& x, std::vector<double>& w) {
    using G = boost::math::quadrature::gauss<double, 16>;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    double h = 2.0 / pieces;
    x.clear();
    w.clear();
    for (int p = 0; p < pieces; ++p) {
        double c = -1.0 + (p + 0.5) * h;
        for (std::size_t i = 0; i < ab.size(); ++i) {
            x.push_back(c - 0.5 * h * ab[i]);
            w.push_back(0.5 * h * wt[i]);
            x.push_back(c + 0.5 * h * ab[i]);
            w.push_back(0.5 * h * wt[i]);
        }
    }
}

bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) <= tol; }

int default_resolution(const Scaling& s) {
    int R = (22 - s.dim()) / s.total();
    return std::min(R, 16);
}

}  // namespace

KernelDecomposition KernelDecomposition::heat(int d, int r, int resolution) {
    require(d >= 2 && d <= kMaxDim, "heat kernel: need 2 <= d <= 4");
    std::vector<int> e(static_cast<std::size_t>(d), 1);
    e[0] = 2;
    KernelDecomposition K;
    K.kind_ = KernelKind::Heat;
    K.s_ = Scaling(e);
    K.beta_ = 2.0;
    K.r_ = r;
    K.R_ = resolution > 0 ? resolution : default_resolution(K.s_);
    K.P_ = [d](const Point& x) {
        double t = x[0];
        if (t <= 0.0) return 0.0;
        double r2 = 0;
        for (int i = 1; i < d; ++i) r2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        return std::pow(4.0 * M_PI * t, -0.5 * (d - 1)) * std::exp(-r2 / (4.0 * t));
    };
    K.build();
    return K;
}

KernelDecomposition KernelDecomposition::riesz(const Scaling& s, double beta, int r, int resolution) {
    require(beta > 0, "riesz kernel: beta must be > 0");
    KernelDecomposition K;
    K.kind_ = KernelKind::Riesz;
    K.s_ = s;
    K.beta_ = beta;
    K.r_ = r;
    K.R_ = resolution > 0 ? resolution : default_resolution(s);
    K.L_ = 1;
    for (int i = 0; i < s.dim(); ++i) K.L_ = std::lcm(K.L_, s[i]);
    double e = beta - s.total();
    // capture by value: the norm only needs s and L
    K.P_ = [s, L = K.L_, e](const Point& x) {
        double acc = 0;
        for (int i = 0; i < s.dim(); ++i) acc += std::pow(std::abs(x[static_cast<std::size_t>(i)]), 2.0 * L / s[i]);
        return std::pow(acc, e / (2.0 * L));
    };
    K.build();
    return K;
}

KernelDecomposition KernelDecomposition::custom(const Scaling& s, double beta, int r, std::function<double(const Point&)> P,
                                                int resolution, double tol) {
    require(beta > 0, "custom kernel: beta must be > 0");
    KernelDecomposition K;
    K.kind_ = KernelKind::Custom;
    K.s_ = s;
    K.beta_ = beta;
    K.r_ = r;
    K.R_ = resolution > 0 ? resolution : default_resolution(s);
    K.P_ = std::move(P);
    for (int i = 0; i < s.dim(); ++i) K.L_ = std::lcm(K.L_, s[i]);
    // P(2^s x) = 2^{beta - |s|} P(x)
    Rng rng(7);
    double defect = 0, scale = 0, c = std::pow(2.0, beta - s.total());
    for (int it = 0; it < 400; ++it) {
        Point x{}, y{};
        for (int i = 0; i < s.dim(); ++i) {
            auto ui = static_cast<std::size_t>(i);
            x[ui] = rng.symmetric();
            y[ui] = std::ldexp(x[ui], s[i]);
        }
        if (K.smooth_norm(x) < 0.125) continue;
        double px = K.P_(x);
        defect = std::max(defect, std::abs(K.P_(y) - c * px));
        scale = std::max(scale, std::abs(px));
    }
    double rel = scale > 0 ? defect / scale : defect;
    if (rel > tol) {
        std::ostringstream os;
        os << "custom kernel: not self-similar, scaling defect " << rel;
        throw PreconditionError(os.str());
    }
    K.build();
    return K;
}

double KernelDecomposition::smooth_norm(const Point& x) const {
    double acc = 0;
    for (int i = 0; i < s_.dim(); ++i) acc += std::pow(std::abs(x[static_cast<std::size_t>(i)]), 2.0 * L_ / s_[i]);
    return std::pow(acc, 1.0 / (2.0 * L_));
}

double KernelDecomposition::cutoff(const Point& x) const { return theta(smooth_norm(x)); }

double KernelDecomposition::corrector(const Point& x) const {
    const int d = s_.dim();
    for (int i = 0; i < d; ++i)
        if (std::abs(x[static_cast<std::size_t>(i)]) >= 1.0) return 0.0;
    double acc = 0;
    for (std::size_t j = 0; j < ck_.size(); ++j) acc += cc_[j] * rho_deriv(ck_[j], x, d);
    return acc;
}

double KernelDecomposition::p0(const Point& x) const {
    double nx = smooth_norm(x);
    double chi = theta(nx) - theta(2.0 * nx);
    double v = chi != 0.0 ? P_(x) * chi : 0.0;
    Point y{};
    for (int i = 0; i < s_.dim(); ++i) y[static_cast<std::size_t>(i)] = std::ldexp(x[static_cast<std::size_t>(i)], s_[i]);
    return v - corrector(x) + std::pow(2.0, s_.total() - beta_) * corrector(y);
}

double KernelDecomposition::level_value(int n, const Point& x) const {
    Point y{};
    for (int i = 0; i < s_.dim(); ++i) y[static_cast<std::size_t>(i)] = std::ldexp(x[static_cast<std::size_t>(i)], n * s_[i]);
    return std::pow(2.0, n * (s_.total() - beta_)) * p0(y);
}

void KernelDecomposition::build() {
    const int d = s_.dim();
    require(d >= 1 && d <= kMaxDim, "kernel: bad dimension");
    require(r_ >= 0, "kernel: r must be >= 0");
    require(R_ >= 1, "kernel: resolution must be >= 1");
    if (L_ == 1)
        for (int i = 0; i < d; ++i) L_ = std::lcm(L_, s_[i]);
    ck_ = multi_indices_below(s_, r_ + 0.5);
    std::stable_sort(ck_.begin(), ck_.end(),
                     [&](const MultiIndex& a, const MultiIndex& b) { return s_.degree(a) < s_.degree(b); });
    const std::size_t nk = ck_.size();

    // moments of P chi by tensor Gauss-Legendre; chi vanishes near 0
    std::vector<double> gx, gw;
    gl_nodes(d == 1 ? 128 : (d == 2 ? 48 : 12), gx, gw);
    std::vector<double> mom(nk, 0.0);
    Index lo{}, hi{};
    for (int i = 0; i < d; ++i) hi[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(gx.size()) - 1;
    for_each_offset(d, lo, hi, [&](const Index& j) {
        Point x{};
        double wt = 1.0;
        for (int i = 0; i < d; ++i) {
            auto ui = static_cast<std::size_t>(i);
            x[ui] = gx[static_cast<std::size_t>(j[ui])];
            wt *= gw[static_cast<std::size_t>(j[ui])];
        }
        double nx = smooth_norm(x);
        if (nx <= 0.25 || nx >= 1.0) return;
        double v = wt * P_(x) * (theta(nx) - theta(2.0 * nx));
        for (std::size_t a = 0; a < nk; ++a) mom[a] += v * monomial(x, ck_[a], d);
    });

    // int d^k rho x^l = (-1)^{|k|} l!/(l-k)! M_{l-k}(rho)
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nk), static_cast<Eigen::Index>(nk));
    Eigen::VectorXd b(static_cast<Eigen::Index>(nk));
    for (std::size_t a = 0; a < nk; ++a) {
        const MultiIndex& l = ck_[a];
        double damp = 1.0 - std::pow(2.0, -(beta_ + s_.degree(l)));
        b(static_cast<Eigen::Index>(a)) = mom[a];
        for (std::size_t c = 0; c < nk; ++c) {
            const MultiIndex& k = ck_[c];
            if (!mi_leq(k, l, d)) continue;
            MultiIndex e{};
            double f = 1.0;
            int tot = 0;
            for (int i = 0; i < d; ++i) {
                auto ui = static_cast<std::size_t>(i);
                e[ui] = l[ui] - k[ui];
                f *= factorial(l[ui]) / factorial(e[ui]);
                tot += k[ui];
            }
            A(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = damp * (tot % 2 ? -f : f) * rho_moment(e, d);
        }
    }
    Eigen::VectorXd c = A.partialPivLu().solve(b);
    cc_.assign(c.data(), c.data() + nk);
    cache_ = std::make_shared<Cache>();
}

std::vector<std::int64_t> KernelDecomposition::table_extents() const {
    std::vector<std::int64_t> e;
    for (int i = 0; i < s_.dim(); ++i) e.push_back(std::int64_t{2} << (R_ * s_[i]));
    return e;
}

const std::vector<double>& KernelDecomposition::table(const MultiIndex& k) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->tab.find(k);
    if (it != cache_->tab.end()) return it->second;
    const int d = s_.dim();
    auto ext = table_extents();
    MultiIndex zero{};
    auto z = cache_->tab.find(zero);
    if (z == cache_->tab.end()) {
        std::int64_t n = 1;
        for (auto e : ext) n *= e;
        std::vector<double> t(static_cast<std::size_t>(n));
        Index lo{}, hi{};
        for (int i = 0; i < d; ++i) hi[static_cast<std::size_t>(i)] = ext[static_cast<std::size_t>(i)] - 1;
        std::size_t flat = 0;
        for_each_offset(d, lo, hi, [&](const Index& j) {
            Point x{};
            for (int i = 0; i < d; ++i)
                x[static_cast<std::size_t>(i)] = -1.0 + std::ldexp(static_cast<double>(j[static_cast<std::size_t>(i)]), -R_ * s_[i]);
            t[flat++] = p0(x);
        });
        z = cache_->tab.emplace(zero, std::move(t)).first;
    }
    if (k == zero) return z->second;
    std::vector<double> period(static_cast<std::size_t>(d), 2.0);
    return cache_->tab.emplace(k, spectral_derivative(z->second, ext, period, k)).first->second;
}

std::vector<double> KernelDecomposition::sample_plus(const Grid& grid, const MultiIndex& k, int n0, int n1) const {
    require(grid.scaling() == s_, "sample_plus: scaling mismatch");
    const int M = grid.level(), d = s_.dim();
    require(M <= R_, "sample_plus: grid finer than the kernel table");
    const auto& tab = table(k);
    auto ext = table_extents();
    std::vector<double> out(static_cast<std::size_t>(grid.size()), 0.0);
    for (int n = std::max(n0, 0); n < n1; ++n) {
        double fac = std::pow(2.0, n * (s_.total() - beta_ + s_.degree(k)));
        Index lo{}, hi{};
        std::array<std::int64_t, kMaxDim> step{};
        for (int i = 0; i < d; ++i) {
            auto ui = static_cast<std::size_t>(i);
            // |x_i| <= 2^{-n s_i}; M - n may be negative for n > M
            hi[ui] = M >= n ? (std::int64_t{1} << ((M - n) * s_[i])) : 0;
            lo[ui] = -hi[ui];
            step[ui] = std::int64_t{1} << ((R_ - M + n) * s_[i]);
        }
        for_each_offset(d, lo, hi, [&](const Index& o) {
            std::int64_t flat = 0;
            for (int i = 0; i < d; ++i) {
                auto ui = static_cast<std::size_t>(i);
                std::int64_t j = o[ui] * step[ui] + ext[ui] / 2;
                if (j < 0 || j >= ext[ui]) return;
                flat = flat * ext[ui] + j;
            }
            double v = tab[static_cast<std::size_t>(flat)];
            if (v != 0.0) out[static_cast<std::size_t>(grid.flatten(o))] += fac * v;
        });
    }
    return out;
}

void KernelDecomposition::write_profile(std::ostream& os) const {
    os.precision(17);
    os << "# rsb kernel profile\n";
    os << "d " << s_.dim() << "\ns";
    for (int i = 0; i < s_.dim(); ++i) os << " " << s_[i];
    os << "\nbeta " << beta_ << "\nr " << r_ << "\nresolution " << R_ << "\nvalues\n";
    for (double v : table(MultiIndex{})) os << v << "\n";
}

KernelProfile read_profile(std::istream& is) {
    KernelProfile p;
    std::string line, key;
    std::getline(is, line);
    require(line.rfind("# rsb kernel profile", 0) == 0, "kernel profile: bad header");
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        ls >> key;
        if (key == "d") ls >> p.d;
        else if (key == "s") {
            int v;
            while (ls >> v) p.s.push_back(v);
        } else if (key == "beta") ls >> p.beta;
        else if (key == "r") ls >> p.r;
        else if (key == "resolution") ls >> p.resolution;
        else if (key == "values") break;
    }
    double v;
    while (is >> v) p.values.push_back(v);
    require(p.d >= 1 && static_cast<int>(p.s.size()) == p.d, "kernel profile: bad scaling");
    std::size_t n = 1;
    for (int e : p.s) n *= std::size_t{2} << (p.resolution * e);
    require(p.values.size() == n, "kernel profile: value count mismatch");
    return p;
}

std::vector<double> coefficients_from_samples(const std::vector<double>& F, const Scaling& s, int M, int N,
                                              const Wavelet& w) {
    require(M >= N && N >= 0, "coefficients_from_samples: need M >= N");
    Grid g(s, M);
    require(static_cast<std::int64_t>(F.size()) == g.size(), "coefficients_from_samples: size mismatch");
    const auto& phi = w.father_at_integers();
    const int d = s.dim(), T = static_cast<int>(phi.size());
    Index lo{}, hi{};
    for (int i = 0; i < d; ++i) hi[static_cast<std::size_t>(i)] = T - 1;
    double norm = std::pow(2.0, -0.5 * M * s.total());
    std::vector<double> c(F.size());
    for (std::int64_t xf = 0; xf < g.size(); ++xf) {
        Index x = g.unflatten(xf);
        double acc = 0;
        for_each_offset(d, lo, hi, [&](const Index& t) {
            double wt = 1.0;
            Index y{};
            for (int i = 0; i < d; ++i) {
                auto ui = static_cast<std::size_t>(i);
                wt *= phi[static_cast<std::size_t>(t[ui])];
                y[ui] = x[ui] + t[ui];
            }
            if (wt != 0.0) acc += wt * F[static_cast<std::size_t>(g.flatten(y))];
        });
        c[static_cast<std::size_t>(xf)] = norm * acc;
    }
    for (int n = M - 1; n >= N; --n) {
        std::vector<double> coarse, det;
        analysis_step(s, n, w, c, coarse, det);
        c = std::move(coarse);
    }
    return c;
}

namespace {

std::vector<double> plus_on_fine(const Pyramid& xi, const Wavelet& w, const KernelDecomposition& K, const MultiIndex& k,
                                 int L, int& M) {
    require(xi.scaling == K.scaling(), "convolve_plus: scaling mismatch");
    if (L <= 0) L = plus_oversample(xi.scaling, xi.levels, K);
    require(xi.levels + L <= K.resolution(), "convolve_plus: kernel table too coarse for this grid");
    DualSamples ds(xi, w, L);
    M = ds.level();
    return ds.convolve(K.sample_plus(ds.grid(), k, 0, xi.levels));
}

}  // namespace

int plus_oversample(const Scaling& s, int N, const KernelDecomposition& K) {
    // the second derivatives of P_{N-1} need about 5 extra levels; see the header
    int L = 5;
    while (L > 1 && ((N + L) * s.total() > 22 || N + L > K.resolution())) --L;
    return L;
}

std::vector<double> convolve_plus_values(const Pyramid& xi, const Wavelet& w, const KernelDecomposition& K,
                                         const MultiIndex& k, int oversample) {
    int M = 0;
    auto v = plus_on_fine(xi, w, K, k, oversample, M);
    return restrict_to_level(v, xi.scaling, M, xi.levels);
}

Pyramid convolve_plus(const Pyramid& xi, const Wavelet& w, const KernelDecomposition& K, int oversample) {
    int M = 0;
    auto v = plus_on_fine(xi, w, K, MultiIndex{}, oversample, M);
    return analyze(coefficients_from_samples(v, xi.scaling, M, xi.levels, w), xi.scaling, xi.levels, w);
}

ExtendedModel extend_structure(const Model& M, const KernelDecomposition& K, double gamma, int oversample) {
    const Structure& st = M.structure();
    const Scaling& s = st.scaling();
    const int d = s.dim();
    const double beta = K.beta();
    require(K.scaling() == s, "extend_structure: kernel scaling mismatch");
    require(gamma > 0, "extend_structure: gamma must be > 0");
    for (const auto& k : multi_indices_below(s, gamma))
        require(s.degree(k) <= K.r(), "extend_structure: kernel must kill polynomials of degree < gamma (raise r)");

    std::vector<Symbol> sy = st.symbols();
    std::vector<int> integrated;
    for (int t = 0; t < st.size(); ++t) {
        if (st[t].polynomial() || st[t].hom >= gamma) continue;
        double h = st[t].hom + beta;
        if (near_integer(h, 1e-6)) {
            std::ostringstream os;
            os << "extend_structure: |I(" << st[t].name << ")| = " << h << " is an integer";
            throw PreconditionError(os.str());
        }
        require(M.has_abstract(t), "extend_structure: base model has no data for " + st[t].name);
        Symbol I;
        I.name = "I[" + st[t].name + "]";
        I.hom = h;
        I.kind = SymbolKind::Integrated;
        I.parent = t;
        sy.push_back(I);
        integrated.push_back(t);
    }
    for (const auto& k : multi_indices_below(s, gamma + beta)) {
        if (st.find_poly(k) >= 0) continue;
        Symbol p;
        p.name = poly_name(k, d);
        p.hom = s.degree(k);
        p.k = k;
        sy.push_back(p);
    }
    Structure ext(s, sy);

    ExtendedModel E{Model(ext, M.wavelet_ptr(), M.levels(), M.oversample()), {}, {}, gamma, beta};
    for (int t = 0; t < st.size(); ++t) E.base.push_back(ext.find(st[t].name));
    E.I.size = ext.size();
    E.I.matrix.assign(static_cast<std::size_t>(ext.size() * ext.size()), 0.0);
    E.I.image.assign(static_cast<std::size_t>(ext.size()), -1);

    const Wavelet& w = M.wavelet();
    for (int t = 0; t < st.size(); ++t)
        if (!st[t].polynomial() && M.has_abstract(t)) {
            const auto& a = M.abstract(t);
            E.model.set_abstract(E.base[static_cast<std::size_t>(t)], a.D, a.taylor);
        }
    for (int t : integrated) {
        int tau = E.base[static_cast<std::size_t>(t)];
        int it = ext.find("I[" + st[t].name + "]");
        E.I.image[static_cast<std::size_t>(tau)] = it;
        E.I.matrix[static_cast<std::size_t>(it * ext.size() + tau)] = 1.0;
        const auto& a = M.abstract(t);
        // the Taylor part of Pi_x tau is killed by P_+, so both D and the
        // coefficients only see D_tau
        std::vector<TaylorTable> tay;
        for (const auto& k : multi_indices_below(s, st[t].hom + beta))
            tay.push_back({k, convolve_plus_values(a.D, w, K, k, oversample)});
        E.model.set_abstract(it, convolve_plus(a.D, w, K, oversample), std::move(tay));
    }
    return E;
}

SchauderResult schauder_apply(const ModelledDistribution& f, const Model& M, const ExtendedModel& E,
                              const KernelDecomposition& K, const Pyramid& Rf, double p, double q, int oversample) {
    const Structure& st = M.structure();
    const Structure& ext = E.model.structure();
    const Scaling& s = st.scaling();
    const int d = s.dim();
    const double gamma = f.gamma, gp = gamma + K.beta();
    require(gamma > 0 && !near_integer(gamma, 1e-9), "schauder: gamma must be positive and not an integer");
    require(!near_integer(gp, 1e-6), "schauder: gamma + beta is (within 1e-6 of) an integer");
    require(f.size == M.size() && f.levels == M.levels(), "schauder: f does not live on the base model");
    require(E.gamma >= gamma - 1e-12 && static_cast<int>(E.base.size()) == st.size(),
            "schauder: extension built for a smaller gamma");
    require(Rf.scaling == s && Rf.levels == M.levels(), "schauder: reconstruction has the wrong shape");
    require(K.scaling() == s && E.beta == K.beta(), "schauder: extension was built for another kernel");
    check_gamma(ext, gp);

    SchauderResult res;
    res.f = ModelledDistribution(E.model, gp);
    const std::int64_t np = E.model.grid().size();
    const Wavelet& w = M.wavelet();

    std::vector<int> abstract_syms;
    for (int t = 0; t < st.size(); ++t) {
        if (st[t].polynomial() || st[t].hom >= gamma) continue;
        int it = E.I.image[static_cast<std::size_t>(E.base[static_cast<std::size_t>(t)])];
        require(it >= 0, "schauder: extension lacks I(" + st[t].name + ")");
        abstract_syms.push_back(t);
        for (std::int64_t x = 0; x < np; ++x) res.f.at(x)[it] = f.at(x)[t];
    }
    for (const auto& k : multi_indices_below(s, gp)) {
        int sig = ext.find_poly(k);
        require(sig >= 0, "schauder: extension lacks a polynomial symbol");
        auto c = convolve_plus_values(Rf, w, K, k, oversample);
        for (int t : abstract_syms) {
            if (s.degree(k) < st[t].hom + K.beta()) continue;
            auto ct = convolve_plus_values(M.abstract(t).D, w, K, k, oversample);
            for (std::int64_t x = 0; x < np; ++x) c[static_cast<std::size_t>(x)] -= f.at(x)[t] * ct[static_cast<std::size_t>(x)];
        }
        double kf = mi_factorial(k, d);
        for (std::int64_t x = 0; x < np; ++x) res.f.at(x)[sig] = c[static_cast<std::size_t>(x)] / kf;
    }
    res.norm = d_norm(res.f, E.model, p, q);
    return res;
}

void IdentityReport::write_csv(std::ostream& os) const {
    os.precision(17);
    os << "n,term,value\n";
    for (std::size_t n = 0; n < level.size(); ++n) os << n << ",detail_diff," << level[n] << "\n";
    os << "-1,direct_norm," << direct_norm << "\n-1,rel_error," << rel_error << "\n";
}

IdentityReport convolution_identity_check(const ModelledDistribution& f, const Model& M, const ExtendedModel& E,
                                          const KernelDecomposition& K, double p, double q, int oversample) {
    const Wavelet& w = M.wavelet();
    auto rec = reconstruct(f, M, p, q);
    auto P = schauder_apply(f, M, E, K, rec.xi, p, q, oversample);
    auto lhs = reconstruct(P.f, E.model, p, q);
    auto direct = convolve_plus(rec.xi, w, K, oversample);
    Pyramid diff = lhs.xi - direct;
    IdentityReport r;
    r.direct_norm = lp_norm_pyramid(direct, w, p);
    double e = lp_norm_pyramid(diff, w, p);
    r.rel_error = r.direct_norm > 0 ? e / r.direct_norm : e;
    for (const auto& det : diff.details) {
        double acc = 0;
        for (double v : det) acc += v * v;
        r.level.push_back(std::sqrt(acc));
    }
    return r;
}

}  // namespace rsb
