#include "rsb/pairing.hpp"

#include <cmath>

#include "rsb/numerics.hpp"

namespace rsb {

namespace {

std::vector<std::int64_t> extents(const Grid& g) {
    std::vector<std::int64_t> e;
    for (int i = 0; i < g.dim(); ++i) e.push_back(g.extent(i));
    return e;
}

}  // namespace

DualSamples::DualSamples(const std::vector<double>& coeffs, const Scaling& s, int N, const Wavelet& w, int oversample)
    : grid_(s, N + oversample), M_(N + oversample) {
    require(oversample >= 0, "dual samples: negative oversampling");
    require(static_cast<std::int64_t>(coeffs.size()) == Grid(s, N).size(), "dual samples: coefficient count mismatch");
    auto fine = refine(coeffs, s, N, M_, w);
    v_ = point_values(fine, s, M_, w);
    double vol = std::ldexp(1.0, -M_ * s.total());
    for (auto& x : v_) x *= vol;
}

DualSamples::DualSamples(const Pyramid& p, const Wavelet& w, int oversample)
    : DualSamples(synthesize_level(p, p.levels, w), p.scaling, p.levels, w, oversample) {}

std::vector<double> DualSamples::correlate(const std::vector<double>& kernel) const {
    return circular_correlate(v_, kernel, extents(grid_));
}

std::vector<double> DualSamples::convolve(const std::vector<double>& kernel) const {
    return circular_convolve(v_, kernel, extents(grid_));
}

std::vector<double> restrict_to_level(const std::vector<double>& fine, const Scaling& s, int M, int n) {
    require(n <= M, "restrict: level above source");
    Grid gf(s, M), gc(s, n);
    require(static_cast<std::int64_t>(fine.size()) == gf.size(), "restrict: size mismatch");
    std::vector<double> out(static_cast<std::size_t>(gc.size()));
    for (std::int64_t i = 0; i < gc.size(); ++i)
        out[static_cast<std::size_t>(i)] = fine[static_cast<std::size_t>(gf.flatten(gc.embed_into(gf, gc.unflatten(i))))];
    return out;
}

double father_monomial_pairing(const Wavelet& w, const Scaling& s, int n, const MultiIndex& k) {
    double r = 1.0;
    for (int i = 0; i < s.dim(); ++i) {
        int lv = n * s[i], ki = k[static_cast<std::size_t>(i)];
        r *= std::ldexp(1.0, -lv * ki) * std::pow(2.0, -0.5 * lv) * w.father_moment(ki);
    }
    return r;
}

double mother_monomial_pairing(const Wavelet& w, const Scaling& s, int n, int psi, const MultiIndex& k) {
    MultiIndex e = psi_local(s, psi);
    double r = 1.0;
    for (int i = 0; i < s.dim(); ++i) {
        auto ui = static_cast<std::size_t>(i);
        int lv = n * s[i];
        // local(e, .) lives on the unit cell of level lv, e indexes the s_i-step block
        r *= std::ldexp(1.0, -lv * k[ui]) * std::pow(2.0, -0.5 * lv) * w.local_moment(e[ui], k[ui]);
    }
    return r;
}

std::vector<double> convolve_coefficients(const std::vector<double>& coeffs, const std::vector<double>& kernel,
                                          const Grid& grid) {
    auto out = circular_convolve(coeffs, kernel, extents(grid));
    double vol = std::ldexp(1.0, -grid.level() * grid.scaling().total());
    for (auto& x : out) x *= vol;
    return out;
}

std::vector<double> project_smooth(const Scaling& s, int N, const Wavelet& w, const std::function<double(const Point&)>& F) {
    Grid g(s, N);
    const auto& phi = w.father_at_integers();
    const int d = s.dim(), T = static_cast<int>(phi.size());
    Index lo{}, hi{};
    for (int i = 0; i < d; ++i) hi[static_cast<std::size_t>(i)] = T - 1;
    double norm = std::pow(2.0, -0.5 * N * s.total());
    std::vector<double> out(static_cast<std::size_t>(g.size()));
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
            if (wt != 0.0) acc += wt * F(g.point(y));
        });
        out[static_cast<std::size_t>(xf)] = norm * acc;
    }
    return out;
}

}  // namespace rsb
