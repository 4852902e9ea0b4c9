#include <doctest.h>

#include <cmath>

#include "rsb/besov.hpp"
#include "rsb/numerics.hpp"
#include "rsb/pairing.hpp"

using namespace rsb;

namespace {

const double kPi = std::acos(-1.0);

Pyramid random_pyramid(const Scaling& s, int N, std::uint64_t seed) {
    Pyramid p(s, N);
    Rng g(seed);
    for (auto& b : p.base) b = g.symmetric();
    for (auto& lv : p.details)
        for (auto& a : lv) a = g.symmetric();
    return p;
}

}  // namespace

TEST_CASE("b-spline basics") {
    for (int m : {2, 4, 8, 12, 16}) {
        double tot = 0;
        const int n = 4000;
        for (int i = 0; i < n; ++i) tot += bspline(m, (i + 0.5) * m / n) * m / n;
        CHECK(tot == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(bspline(m, 0.3 * m) == doctest::Approx(bspline(m, 0.7 * m)).epsilon(1e-13));
        CHECK(bspline_integral(m, 0.5 * m) == doctest::Approx(0.5).epsilon(1e-13));
        for (int j = 1; j < std::min(m - 1, 5); ++j) {
            double x = 0.37 * m, h = 1e-5;
            double fd = (bspline_deriv(m, j - 1, x + h) - bspline_deriv(m, j - 1, x - h)) / (2 * h);
            CHECK(bspline_deriv(m, j, x) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
    // cubic B-spline at its centre is 2/3
    CHECK(bspline(4, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(bspline(4, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CenteredBump b;
    CHECK(b.moment(0) == doctest::Approx(1.0).epsilon(1e-13));
    // variance of the scaled B-spline: m/12 * (2/m)^2
    CHECK(b.moment(2) == doctest::Approx(1.0 / (3.0 * b.m)).epsilon(1e-12));
    SmoothStep st;
    CHECK(st.deriv(0, -0.1) == 1.0);
    CHECK(st.deriv(0, 1.1) == 0.0);
    CHECK(st.deriv(0, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("dictionary normalization and annihilation") {
    for (auto sv : {std::vector<int>{1}, std::vector<int>{2, 1}}) {
        Scaling s(sv);
        auto D = Dictionary::standard(s, 3);
        CHECK(D.size() == 8);
        for (const auto& eta : D.profiles()) {
            CHECK(eta.cr_norm(s, 3) == doctest::Approx(1.0).epsilon(1e-12));
            Point far{};
            far[0] = 1.0;
            CHECK(eta.value(far) == 0.0);
        }
        auto A = D.annihilating(2.0);
        for (const auto& eta : A.profiles()) {
            CHECK(eta.cr_norm(s, 3) == doctest::Approx(1.0).epsilon(1e-12));
            for (const auto& k : multi_indices_below(s, 2.5)) CHECK(std::abs(eta.moment(k)) < 1e-12);
        }
    }
    auto rho = standard_bump(1);
    CHECK(rho.moment(MultiIndex{0}) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(rho.moment(MultiIndex{1})) < 1e-15);
}

TEST_CASE("lpn norm") {
    Scaling s({1});
    for (double p : {1.0, 2.0, 3.5, kInf}) {
        std::vector<double> one(64, 1.0);
        CHECK(lpn_norm(one, s, 6, p) == doctest::Approx(1.0).epsilon(1e-14));
        std::vector<double> ind(64, 0.0);
        ind[5] = 1.0;
        double expect = is_inf(p) ? 1.0 : std::pow(2.0, -6.0 / p);
        CHECK(lpn_norm(ind, s, 6, p) == doctest::Approx(expect).epsilon(1e-14));
    }
    Scaling s2({2, 1});
    Rng g(3);
    std::vector<double> u(512);
    for (auto& v : u) v = g.symmetric();
    long double acc = 0;
    for (double v : u) acc += std::pow(std::abs(static_cast<long double>(v)), 3.0L);
    double brute = static_cast<double>(std::pow(acc / 512.0L, 1.0L / 3.0L));
    CHECK(lpn_norm(u, s2, 3, 3.0) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("wavelet besov norm: structural properties") {
    Scaling s({1});
    auto a = random_pyramid(s, 8, 1), b = random_pyramid(s, 8, 2);
    BesovParams P{-0.3, 2.0, 2.0};
    CHECK(besov_norm_wavelet(Pyramid(s, 8), P).value == 0.0);
    double na = besov_norm_wavelet(a, P).value, nb = besov_norm_wavelet(b, P).value;
    CHECK(besov_norm_wavelet(-3.0 * a, P).value == doctest::Approx(3.0 * na).epsilon(1e-14));
    CHECK(besov_norm_wavelet(a + b, P).value <= na + nb);
    BesovParams lo{-0.6, 2.0, 2.0};
    CHECK(besov_norm_wavelet(a, lo).value <= na);
    BesovParams qi{-0.3, 2.0, kInf};
    CHECK(besov_norm_wavelet(a, qi).value <= na);
    CHECK_THROWS_AS(besov_norm_wavelet(Pyramid(), P), PreconditionError);
    CHECK_THROWS_AS(besov_norm_wavelet(a, BesovParams{0, 0.5, 1}), PreconditionError);
}

TEST_CASE("dirac critical exponent") {
    Scaling s({1});
    auto w = Wavelet::build(3, 1);
    const int N = 12;
    auto delta = synthesize_dirac(s, N, w, Point{0.3, 0, 0, 0});
    for (double p : {1.0, 2.0, kInf}) {
        double expect = -1.0 + (is_inf(p) ? 0.0 : 1.0 / p);
        double crit = critical_exponent(delta, p, 4);
        CHECK(std::abs(crit - expect) < 0.1);
    }
    // bounded at the critical exponent, growing beyond it (p = 2)
    BesovParams at{-0.5, 2.0, kInf}, above{-0.3, 2.0, kInf};
    auto small = synthesize_dirac(s, 6, w, Point{0.3, 0, 0, 0});
    double r_at = besov_norm_wavelet(delta, at).value / besov_norm_wavelet(small, at).value;
    double r_above = besov_norm_wavelet(delta, above).value / besov_norm_wavelet(small, above).value;
    CHECK(r_at < 1.5);
    CHECK(r_above > std::pow(2.0, 6 * 0.2) * 0.7);
}

TEST_CASE("dirac at a grid point reproduces basis values") {
    Scaling s({1});
    auto w = Wavelet::build(2, 0);
    Point x0{0.25, 0, 0, 0};
    auto d = synthesize_dirac(s, 5, w, x0);
    Grid g(s, 3);
    auto v = eval_basis(w, s, BasisKind::Mother, 3, g.unflatten(1), 0, {x0});
    CHECK(d.detail(3, 0, 1) == v[0]);
}

TEST_CASE("sin golden wavelet norm") {
    Scaling s({1});
    auto w = Wavelet::build(6, 2);
    const int N = 8;
    auto F = [](const Point& x) { return std::sin(2 * kPi * x[0]); };
    auto xi = synthesize_smooth(s, N, w, F);
    // oracle: pair the samples with synthesized unit basis vectors
    Grid gN(s, N);
    std::vector<double> u(static_cast<std::size_t>(gN.size()));
    for (std::int64_t i = 0; i < gN.size(); ++i) u[static_cast<std::size_t>(i)] = F(gN.point(gN.unflatten(i)));
    auto coeff = [&](int n, int psi, std::int64_t x) {
        Pyramid e(s, N);
        if (n < 0)
            e.base[0] = 1;
        else
            e.detail(n, psi, x) = 1;
        auto vec = inverse_transform(e, w);
        double acc = 0;
        for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * vec[i];
        return acc * std::ldexp(1.0, -N);
    };
    double base = std::abs(coeff(-1, 0, 0));
    double sq = 0;
    for (int n = 0; n < N; ++n) {
        double lv = 0;
        for (std::int64_t x = 0; x < (1 << n); ++x) lv += std::ldexp(1.0, -n) * std::pow(coeff(n, 0, x), 2);
        sq += std::pow(2.0, 2 * n * (0.5 + 1.5)) * lv;
    }
    double oracle = base + std::sqrt(sq);
    double v = besov_norm_wavelet(xi, BesovParams{1.5, 2.0, 2.0}).value;
    CHECK(v == doctest::Approx(oracle).epsilon(1e-10));
    // frozen from the oracle above
    CHECK(v == doctest::Approx(1.3522320623459112).epsilon(1e-12));
}

TEST_CASE("random besov: norm bounded in N") {
    Scaling s({1});
    BesovParams P{-0.4, 2.0, kInf};
    double prev = 0;
    for (int N : {6, 8, 10}) {
        double v = besov_norm_wavelet(synthesize_random_besov(s, N, -0.4, 11), P).value;
        if (prev > 0) CHECK(v < 1.05 * prev + 1e-12);
        prev = std::max(prev, v);
        CHECK(std::isfinite(v));
    }
}

TEST_CASE("smooth synthesis round trip") {
    Scaling s({1});
    auto w = Wavelet::build(3, 1);
    auto xi = synthesize_smooth(s, 7, w, [](const Point& x) { return std::sin(2 * kPi * x[0]); });
    auto u = inverse_transform(xi, w);
    Grid g(s, 7);
    for (std::int64_t i = 0; i < g.size(); ++i)
        CHECK(u[static_cast<std::size_t>(i)] == doctest::Approx(std::sin(2 * kPi * g.point(g.unflatten(i))[0])).epsilon(1e-10));
}

TEST_CASE("test-function norm: calibration against the wavelet norm") {
    Scaling s({1});
    auto w = Wavelet::build(6, 2);
    auto D = Dictionary::standard(s, 2);
    auto xi = synthesize_random_besov(s, 8, -0.5, 5);
    BesovParams P{-0.5, 2.0, kInf};
    CHECK(besov_norm_testfn(Pyramid(s, 8), P, D, w).value == 0.0);
    double wv = besov_norm_wavelet(xi, P).value;
    double tv = besov_norm_testfn(xi, P, D, w).value;
    // calibrated once on this configuration (measured 0.00854)
    const double C = 150.0;
    CHECK(tv / wv >= 1.0 / C);
    CHECK(tv <= C * wv);
    auto D4 = Dictionary::standard(s, 2, 4);
    CHECK(besov_norm_testfn(xi, P, D4, w).value <= tv);
    CHECK_THROWS_AS(besov_norm_testfn(xi, BesovParams{2.5, 2, 2}, D, w), PreconditionError);
    auto sm = synthesize_smooth(s, 8, w, [](const Point& x) { return std::cos(2 * kPi * x[0]); });
    auto rep = besov_norm_testfn(sm, BesovParams{1.5, 2.0, kInf}, D, w);
    CHECK(rep.first > 0);
    double ratio = rep.value / besov_norm_wavelet(sm, BesovParams{1.5, 2.0, kInf}).value;
    CHECK(ratio >= 1.0 / C);
    CHECK(ratio <= C);
}

TEST_CASE("mollify") {
    Scaling s({1});
    auto w = Wavelet::build(6, 2);
    auto c = synthesize_smooth(s, 7, w, [](const Point&) { return 2.5; });
    auto m = mollify(c, 3, w, 1.0);
    for (double v : m.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(!mollify(c, 3, w, -0.5).hypothesis_ok);
    auto F = [](const Point& x) { return std::sin(2 * kPi * x[0]) + 0.3 * std::cos(6 * kPi * x[0]); };
    const int N = 9;
    auto xi = synthesize_smooth(s, N, w, F);
    Grid g(s, N);
    double prev = 1e9;
    std::vector<double> xs, ys;
    std::vector<double> last;
    for (int n = 1; n <= 6; ++n) {
        auto mv = mollify(xi, n, w, 1.0).values;
        std::vector<double> diff(mv.size());
        for (std::int64_t i = 0; i < g.size(); ++i) diff[static_cast<std::size_t>(i)] = mv[static_cast<std::size_t>(i)] - F(g.point(g.unflatten(i)));
        double e = lpn_norm(diff, s, N, 2.0);
        CHECK(e < prev);
        prev = e;
        if (!last.empty()) {
            std::vector<double> inc(mv.size());
            for (std::size_t i = 0; i < mv.size(); ++i) inc[i] = mv[i] - last[i];
            xs.push_back(n);
            ys.push_back(std::log2(lpn_norm(inc, s, N, 2.0)));
        }
        last = mv;
    }
    // Cauchy increments decay at least like lambda^{min(1, alpha)}
    CHECK(-slope_fit(xs, ys) >= 1.0 - 0.1);
}

TEST_CASE("dual-sample pairing is exact on low-degree polynomials") {
    Scaling s({1});
    auto w = Wavelet::build(6, 2);
    // xi = 1 in V_5: every <xi, g> is the integral of g
    auto one = synthesize_smooth(s, 5, w, [](const Point&) { return 1.0; });
    DualSamples ds(one, w, 3);
    auto rho = standard_bump(1);
    auto vals = ds.correlate(sample_test_kernel(rho, ds.grid(), 2));
    for (double v : vals) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(father_monomial_pairing(w, s, 3, MultiIndex{0}) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
}
