#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <memory>
#include <sstream>

#include "rsb/besov.hpp"
#include "rsb/numerics.hpp"
#include "rsb/schauder.hpp"

using namespace rsb;

namespace {

const double kTwoPi = 2.0 * std::acos(-1.0);

std::shared_ptr<const Wavelet> w6() {
    static auto w = std::make_shared<Wavelet>(Wavelet::build(6, 2));
    return w;
}

const KernelDecomposition& riesz175() {
    static auto K = KernelDecomposition::riesz(Scaling({1}), 1.75, 3);
    return K;
}

const KernelDecomposition& riesz2() {
    static auto K = KernelDecomposition::riesz(Scaling({1}), 2.0, 3);
    return K;
}

ModelledDistribution sin_md(const Model& M, double gamma) {
    return taylor_lift(M, gamma, [](const MultiIndex& k, const Point& x) { return k[0] == 0 ? std::sin(kTwoPi * x[0]) : 0.0; });
}

struct NoiseCase {
    Pyramid xi;
    Model M;
    ExtendedModel E;
};

NoiseCase noise_case(int N, std::uint64_t seed = 5) {
    auto xi = synthesize_random_besov(Scaling({1}), N, -0.5, seed);
    auto M = Model::noise(-0.5, xi, 0.3, w6());
    auto E = extend_structure(M, riesz2(), 0.3);
    return {xi, M, E};
}

double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("P_0 moments vanish against an adaptive oracle") {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const auto& K = riesz175();
    for (int l = 0; l <= 3; ++l) {
        auto f = [&](double x) { return K.p0({x}) * std::pow(x, l); };
        const double br[] = {-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0};
        double m = 0;
        for (int i = 0; i + 1 < 7; ++i) m += GK::integrate(f, br[i], br[i + 1], 6, 1e-13);
        CHECK(std::abs(m) <= 1e-8);
    }
    // degree r + 1 is not killed
    auto f4 = [&](double x) { return K.p0({x}) * std::pow(x, 4); };
    CHECK(std::abs(GK::integrate(f4, -1.0, 1.0, 6, 1e-13)) > 1e-4);

    // heat kernel in (t, x): tensor 20-point Gauss on 16 x 16 panels (a
    // different rule from the one that solved for the correctors)
    auto H = KernelDecomposition::heat(2, 2);
    using G20 = boost::math::quadrature::gauss<double, 20>;
    std::vector<double> x, w;
    for (int p = 0; p < 16; ++p) {
        double c = -1.0 + (p + 0.5) / 8.0;
        for (std::size_t i = 0; i < G20::abscissa().size(); ++i)
            for (double sg : {-1.0, 1.0}) {
                x.push_back(c + sg * G20::abscissa()[i] / 16.0);
                w.push_back(G20::weights()[i] / 16.0);
            }
    }
    auto idx = multi_indices_below(H.scaling(), 2.5);
    std::vector<double> mom(idx.size(), 0.0);
    for (std::size_t a = 0; a < x.size(); ++a)
        for (std::size_t b = 0; b < x.size(); ++b) {
            double v = w[a] * w[b] * H.p0({x[a], x[b]});
            for (std::size_t j = 0; j < idx.size(); ++j) mom[j] += v * std::pow(x[a], idx[j][0]) * std::pow(x[b], idx[j][1]);
        }
    for (double m : mom) CHECK(std::abs(m) <= 1e-8);
}

TEST_CASE("heat kernel telescoping away from the origin") {
    auto H = KernelDecomposition::heat(2, 2);
    const int N = 6;
    Rng rng(3);
    double err = 0, scale = 0;
    int used = 0;
    while (used < 2000) {
        Point x{rng.symmetric(), rng.symmetric()};
        if (H.scaling().norm(x) < std::ldexp(1.0, -N) || H.smooth_norm(x) >= 1.0) continue;
        ++used;
        double sum = 0;
        for (int n = 0; n < N; ++n) sum += H.level_value(n, x);
        double tail = H.kernel(x) * (1.0 - H.cutoff(x)) + H.corrector(x);
        err = std::max(err, std::abs(sum + tail - H.kernel(x)));
        scale = std::max(scale, std::abs(H.kernel(x)));
    }
    CHECK(err <= 1e-6 * std::max(1.0, scale));
    // support of P_0 in the unit ball, and the level scaling identity
    CHECK(H.p0({0.9, 1.0}) == 0.0);
    CHECK(H.p0({-1.0, 0.3}) == 0.0);
    Point y{0.3, -0.2}, y2{0.3 / 16.0, -0.2 / 4.0};
    CHECK(H.level_value(2, y2) == doctest::Approx(std::ldexp(H.p0(y), 2 * 1)).epsilon(1e-14));
}

TEST_CASE("custom kernels must be self-similar") {
    Scaling s({1});
    auto K = KernelDecomposition::custom(s, 1.5, 2, [](const Point& x) { return 3.0 * std::sqrt(std::abs(x[0])); });
    CHECK(K.beta() == 1.5);
    CHECK_THROWS_AS(KernelDecomposition::custom(s, 1.5, 2, [](const Point& x) { return std::exp(-x[0] * x[0]); }),
                    PreconditionError);
}

TEST_CASE("derivative tables against finite differences") {
    const auto& K = riesz175();
    auto ext = K.table_extents();
    const auto& t1 = K.table({1});
    const auto& t2 = K.table({2});
    double h = 2.0 / static_cast<double>(ext[0]), e1 = 0, e2 = 0, m2 = max_abs(t2);
    for (std::int64_t j = 1; j < ext[0]; j += 37) {
        double x = -1.0 + static_cast<double>(j) * h;
        double d1 = (K.p0({x + 1e-5}) - K.p0({x - 1e-5})) / 2e-5;
        double d2 = (K.p0({x + 1e-4}) - 2.0 * K.p0({x}) + K.p0({x - 1e-4})) / 1e-8;
        e1 = std::max(e1, std::abs(d1 - t1[static_cast<std::size_t>(j)]));
        e2 = std::max(e2, std::abs(d2 - t2[static_cast<std::size_t>(j)]));
    }
    MESSAGE("table errors " << e1 << " " << e2 << " of " << m2);
    CHECK(e1 < 1e-4);
    CHECK(e2 < 1e-5 * m2);
}

TEST_CASE("kernel profile round trip") {
    auto K = KernelDecomposition::riesz(Scaling({1}), 1.75, 2, 8);
    std::stringstream ss;
    K.write_profile(ss);
    auto p = read_profile(ss);
    CHECK(p.d == 1);
    CHECK(p.beta == 1.75);
    CHECK(p.r == 2);
    CHECK(p.resolution == 8);
    REQUIRE(p.values.size() == K.table({0}).size());
    CHECK(max_abs(p.values) == doctest::Approx(max_abs(K.table({0}))).epsilon(1e-15));
}

TEST_CASE("integration map grading") {
    auto C = noise_case(7);
    const auto& st = C.E.model.structure();
    int I = st.find("I[Xi]");
    REQUIRE(I >= 0);
    CHECK(st[I].hom == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(st[I].kind == SymbolKind::Integrated);
    for (int t = 0; t < st.size(); ++t)
        for (int u = 0; u < st.size(); ++u) {
            double v = C.E.I.matrix[static_cast<std::size_t>(u * st.size() + t)];
            if (st[t].polynomial()) CHECK(v == 0.0);
            if (v != 0.0) CHECK(st[u].hom == doctest::Approx(st[t].hom + 2.0).epsilon(1e-15));
        }
    // polynomial-only base: nothing to integrate
    auto P = Model::polynomial(Scaling({1}), 0.5, w6(), 6);
    auto E = extend_structure(P, riesz175(), 0.5);
    for (int t = 0; t < E.model.size(); ++t) CHECK(E.model.structure()[t].polynomial());
    // I commutes with Gamma up to polynomials
    std::vector<double> G;
    C.E.model.gamma({3}, {40}, G);
    int X = st.find("Xi");
    for (int s = 0; s < st.size(); ++s)
        if (!st[s].polynomial()) CHECK(G[static_cast<std::size_t>(s * st.size() + I)] == (s == I ? 1.0 : 0.0));
    CHECK(G[static_cast<std::size_t>(X * st.size() + X)] == 1.0);

    // alpha + beta on an integer is rejected
    auto xi = synthesize_random_besov(Scaling({1}), 6, -0.5, 1);
    auto M = Model::noise(-0.5, xi, 0.3, w6());
    auto Kbad = KernelDecomposition::riesz(Scaling({1}), 1.5, 3);
    CHECK_THROWS_AS(extend_structure(M, Kbad, 0.3), PreconditionError);
}

TEST_CASE("extended model is admissible") {
    auto C = noise_case(8);
    auto v = validate_model(C.E.model, 500, 2);
    MESSAGE("validation " << v.max_violation());
    CHECK(v.valid(1e-8));

    int I = C.E.model.structure().find("I[Xi]");
    // the definition re-evaluated on a finer quadrature grid
    auto E2 = extend_structure(C.M, riesz2(), 0.3, 7);
    double diff = 0, ref = 0;
    for (int n = 0; n <= 8; ++n) {
        auto a = C.E.model.father_pairing(I, n);
        auto b = E2.model.father_pairing(I, n);
        for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
        ref = std::max(ref, max_abs(a));
    }
    MESSAGE("self-consistency " << diff << " of " << ref);
    CHECK(diff <= 1e-6 * std::max(1.0, ref));
}

TEST_CASE("wavelet decay of the integrated noise") {
    // <Pi_x I(Xi), psi^n_x> / 2^{-n/2} ~ 2^{-1.5 n}. The coarse levels are
    // distorted by the moment cancellation of P_0, so the fit starts at 6.
    const int N = 12;
    auto C = noise_case(N);
    int I = C.E.model.structure().find("I[Xi]");
    std::vector<double> ns, ls;
    for (int n = 6; n < N; ++n) {
        double m = max_abs(C.E.model.mother_pairing(I, n, 0)) / std::pow(2.0, -0.5 * n);
        ns.push_back(n);
        ls.push_back(std::log2(m));
    }
    double slope = -slope_fit(ns, ls);
    MESSAGE("I(Xi) wavelet slope " << slope);
    CHECK(std::abs(slope - 1.5) <= 0.1);
}

TEST_CASE("schauder_apply on noise and zero") {
    auto C = noise_case(8);
    const auto& st = C.E.model.structure();
    int X = C.M.structure().find("Xi"), I = st.find("I[Xi]");
    auto f = constant_md(C.M, 0.3, X);
    auto P = schauder_apply(f, C.M, C.E, riesz2(), C.xi);
    for (std::int64_t x = 0; x < C.M.grid().size(); x += 17) CHECK(P.f.at(x)[I] == 1.0);
    // X^2 sits above |I(Xi)|, so its coefficient cancels exactly
    int X2 = st.find_poly({2});
    double x2 = 0;
    for (std::int64_t x = 0; x < C.M.grid().size(); ++x) x2 = std::max(x2, std::abs(P.f.at(x)[X2]));
    CHECK(x2 < 1e-10);

    ModelledDistribution zero(C.M, 0.3);
    auto Z = schauder_apply(zero, C.M, C.E, riesz2(), Pyramid(Scaling({1}), 8));
    CHECK(max_abs(Z.f.values) == 0.0);
    auto rz = convolution_identity_check(zero, C.M, C.E, riesz2());
    CHECK(rz.rel_error == 0.0);

    // R P f = P_+ * xi
    auto r = convolution_identity_check(f, C.M, C.E, riesz2());
    MESSAGE("noise identity " << r.rel_error);
    CHECK(r.rel_error <= 1e-8);

    CHECK_THROWS_AS(schauder_apply(f, C.M, C.E, riesz175(), C.xi), PreconditionError);
}

TEST_CASE("schauder_apply is linear") {
    auto C = noise_case(7);
    int X = C.M.structure().find("Xi");
    ModelledDistribution f(C.M, 0.3), g(C.M, 0.3);
    for (std::int64_t x = 0; x < C.M.grid().size(); ++x) {
        double t = C.M.grid().point(C.M.grid().unflatten(x))[0];
        f.at(x)[X] = std::cos(kTwoPi * t);
        f.at(x)[C.M.structure().find_poly({0})] = std::sin(kTwoPi * t);
        g.at(x)[X] = 1.0 + 0.5 * std::sin(2.0 * kTwoPi * t);
    }
    auto Rf = reconstruct(f, C.M, 2, kInf).xi;
    auto Rg = reconstruct(g, C.M, 2, kInf).xi;
    auto Pf = schauder_apply(f, C.M, C.E, riesz2(), Rf);
    auto Pg = schauder_apply(g, C.M, C.E, riesz2(), Rg);
    auto Ph = schauder_apply(2.0 * f - 0.5 * g, C.M, C.E, riesz2(), 2.0 * Rf - 0.5 * Rg);
    auto comb = 2.0 * Pf.f - 0.5 * Pg.f;
    double e = 0, m = 0;
    for (std::size_t i = 0; i < comb.values.size(); ++i) {
        e = std::max(e, std::abs(comb.values[i] - Ph.f.values[i]));
        m = std::max(m, std::abs(comb.values[i]));
    }
    CHECK(e <= 1e-12 * std::max(1.0, m));
}

TEST_CASE("convolution identity for the sin lift") {
    std::vector<double> ns, errs;
    for (int N = 6; N <= 8; ++N) {
        auto M = Model::polynomial(Scaling({1}), 0.5, w6(), N);
        auto f = sin_md(M, 0.5);
        auto E = extend_structure(M, riesz175(), 0.5);
        auto r = convolution_identity_check(f, M, E, riesz175());
        MESSAGE("N=" << N << " identity " << r.rel_error);
        ns.push_back(N);
        errs.push_back(std::log2(r.rel_error));
        if (N == 8) {
            CHECK(r.rel_error <= 1e-3);
            std::ostringstream os;
            r.write_csv(os);
            CHECK(os.str().find("rel_error") != std::string::npos);
        }
    }
    double order = -slope_fit(ns, errs);
    MESSAGE("refinement order " << order);
    CHECK(order > 0.5);
}

TEST_CASE("polynomial structure: f_0 of the output is P_+ * F") {
    const int N = 8;
    auto M = Model::polynomial(Scaling({1}), 0.5, w6(), N);
    auto f = sin_md(M, 0.5);
    auto E = extend_structure(M, riesz175(), 0.5);
    auto Rf = reconstruct(f, M, 2, kInf).xi;
    auto P = schauder_apply(f, M, E, riesz175(), Rf);
    // direct oracle: P_+ * sin = c sin with c = sum_n int P_n(x) cos(2 pi x) dx
    using G20 = boost::math::quadrature::gauss<double, 20>;
    double c = 0;
    for (int n = 0; n < N; ++n) {
        double h = std::ldexp(1.0, -n);
        auto g = [&](double x) { return riesz175().level_value(n, {x}) * std::cos(kTwoPi * x); };
        for (int j = -128; j < 128; ++j) c += G20::integrate(g, j * h / 128, (j + 1) * h / 128);
    }
    // Rf is sin shifted by the first moment of phi (samples used as coefficients)
    double mu = w6()->father_moment(1) * std::ldexp(1.0, -N);
    int one = E.model.structure().find_poly({0});
    double e = 0;
    for (std::int64_t x = 0; x < M.grid().size(); ++x) {
        double t = M.grid().point(M.grid().unflatten(x))[0];
        e = std::max(e, std::abs(P.f.at(x)[one] - c * std::sin(kTwoPi * (t - mu))));
    }
    MESSAGE("f_0 error " << e << " c " << c);
    CHECK(e <= 1e-3 * std::abs(c));
}

TEST_CASE("convolution gains beta") {
    Scaling s({1});
    const int N = 10;
    for (std::uint64_t seed : {1u, 2u}) {
        auto xi = synthesize_random_besov(s, N, -0.5, seed);
        auto y = convolve_plus(xi, *w6(), riesz175());
        // the lowest levels see the moment cancellation of P_0, so fit from level 6
        double a0 = critical_exponent(xi, 2, 6), a1 = critical_exponent(y, 2, 6);
        MESSAGE("gain " << a1 - a0);
        CHECK(std::abs(a1 - a0 - 1.75) <= 0.2);
    }
}

TEST_CASE("output norm stays within a calibrated multiple of the input") {
    // |||P f|||_{gamma + beta} <= C |||f||| ||Pi|| (1 + ||Gamma||), C frozen from N = 6
    Scaling s({1});
    auto dict = Dictionary::standard(s, 2, 4);
    std::vector<double> ratio;
    for (int N = 6; N <= 8; ++N) {
        auto C = noise_case(N);
        int X = C.M.structure().find("Xi");
        ModelledDistribution f(C.M, 0.3);
        for (std::int64_t x = 0; x < C.M.grid().size(); ++x)
            f.at(x)[X] = std::cos(kTwoPi * C.M.grid().point(C.M.grid().unflatten(x))[0]);
        auto Rf = reconstruct(f, C.M, 2, kInf).xi;
        auto P = schauder_apply(f, C.M, C.E, riesz2(), Rf);
        auto nm = model_norms(C.E.model, 2.3, dict);
        double in = d_norm(f, C.M, 2, kInf).total * nm.pi * (1.0 + nm.gamma);
        ratio.push_back(P.norm.total / in);
        MESSAGE("N=" << N << " ratio " << ratio.back());
    }
    // measured 32.1, 31.4, 31.0
    for (double r : ratio) CHECK(r <= 40.0);
}
