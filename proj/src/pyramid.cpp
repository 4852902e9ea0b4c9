#include "rsb/pyramid.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "binio.hpp"
#include "rsb/numerics.hpp"

namespace rsb {

Pyramid::Pyramid(Scaling s, int N) : scaling(std::move(s)), levels(N) {
    require(N >= 0, "pyramid: negative level count");
    base.assign(static_cast<std::size_t>(Grid(scaling, 0).size()), 0.0);
    details.resize(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n)
        details[static_cast<std::size_t>(n)].assign(static_cast<std::size_t>(num_psi() * level_size(n)), 0.0);
}

std::size_t Pyramid::storage() const {
    std::size_t t = base.size();
    for (auto& d : details) t += d.size();
    return t;
}

double Pyramid::l2() const {
    std::vector<double> sq;
    sq.reserve(storage());
    for (double v : base) sq.push_back(v * v);
    for (auto& d : details)
        for (double v : d) sq.push_back(v * v);
    return std::sqrt(pairwise_sum(sq));
}

Pyramid& Pyramid::operator+=(const Pyramid& o) {
    require(o.scaling == scaling && o.levels == levels, "pyramid: shape mismatch");
    for (std::size_t i = 0; i < base.size(); ++i) base[i] += o.base[i];
    for (std::size_t n = 0; n < details.size(); ++n)
        for (std::size_t i = 0; i < details[n].size(); ++i) details[n][i] += o.details[n][i];
    return *this;
}

Pyramid& Pyramid::operator*=(double c) {
    for (double& v : base) v *= c;
    for (auto& d : details)
        for (double& v : d) v *= c;
    return *this;
}

Pyramid operator+(Pyramid a, const Pyramid& b) { return a += b; }
Pyramid operator-(Pyramid a, const Pyramid& b) {
    Pyramid nb = b;
    nb *= -1.0;
    return a += nb;
}
Pyramid operator*(double c, Pyramid a) { return a *= c; }

int psi_index(const Scaling& s, const MultiIndex& e) {
    int f = 0;
    for (int i = 0; i < s.dim(); ++i) f = (f << s[i]) + e[static_cast<std::size_t>(i)];
    return f - 1;
}

MultiIndex psi_local(const Scaling& s, int psi) {
    MultiIndex e{};
    int f = psi + 1;
    for (int i = s.dim() - 1; i >= 0; --i) {
        e[static_cast<std::size_t>(i)] = f & ((1 << s[i]) - 1);
        f >>= s[i];
    }
    return e;
}

namespace {

void analyze_line(std::vector<double>& x, int steps, const Wavelet& w) {
    const auto& h = w.lowpass();
    const auto& g = w.highpass();
    const int L = w.taps();
    std::size_t len = x.size();
    std::size_t M = len >> steps;
    std::vector<double> cur = x, lo, out(len);
    for (int j = steps - 1; j >= 0; --j) {
        std::size_t n = cur.size(), half = n / 2;
        lo.assign(half, 0.0);
        std::vector<double> hi(half, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            double a = 0, b = 0;
            for (int t = 0; t < L; ++t) {
                double v = cur[(2 * k + static_cast<std::size_t>(t)) % n];
                a += h[static_cast<std::size_t>(t)] * v;
                b += g[static_cast<std::size_t>(t)] * v;
            }
            lo[k] = a;
            hi[k] = b;
        }
        std::size_t blk = std::size_t{1} << steps;
        std::size_t sub = std::size_t{1} << j;
        for (std::size_t k = 0; k < M; ++k)
            for (std::size_t m = 0; m < sub; ++m) out[k * blk + sub + m] = hi[k * sub + m];
        cur.swap(lo);
    }
    std::size_t blk = std::size_t{1} << steps;
    for (std::size_t k = 0; k < M; ++k) out[k * blk] = cur[k];
    x.swap(out);
}

void synthesize_line(std::vector<double>& x, int steps, const Wavelet& w) {
    const auto& h = w.lowpass();
    const auto& g = w.highpass();
    const int L = w.taps();
    std::size_t len = x.size();
    std::size_t M = len >> steps;
    std::size_t blk = std::size_t{1} << steps;
    std::vector<double> cur(M);
    for (std::size_t k = 0; k < M; ++k) cur[k] = x[k * blk];
    for (int j = 0; j < steps; ++j) {
        std::size_t sub = std::size_t{1} << j;
        std::size_t half = cur.size(), n = 2 * half;
        std::vector<double> next(n, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            double hv = x[(k / sub) * blk + sub + (k % sub)];
            double lv = cur[k];
            for (int t = 0; t < L; ++t) next[(2 * k + static_cast<std::size_t>(t)) % n] += h[static_cast<std::size_t>(t)] * lv + g[static_cast<std::size_t>(t)] * hv;
        }
        cur.swap(next);
    }
    x.swap(cur);
}

template <class F>
void for_each_line(const Grid& grid, int axis, F&& fn) {
    std::int64_t ext = grid.extent(axis);
    std::int64_t stride = 1;
    for (int j = axis + 1; j < grid.dim(); ++j) stride *= grid.extent(j);
    std::int64_t outer = grid.size() / (ext * stride);
    for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t in = 0; in < stride; ++in) fn(o * ext * stride + in, stride, ext);
}

void transform_axes(const Grid& fine, std::vector<double>& data, const Scaling& s, const Wavelet& w, bool forward) {
    std::vector<double> buf;
    for (int i = 0; i < s.dim(); ++i) {
        for_each_line(fine, i, [&](std::int64_t start, std::int64_t stride, std::int64_t ext) {
            buf.resize(static_cast<std::size_t>(ext));
            for (std::int64_t k = 0; k < ext; ++k) buf[static_cast<std::size_t>(k)] = data[static_cast<std::size_t>(start + k * stride)];
            if (forward)
                analyze_line(buf, s[i], w);
            else
                synthesize_line(buf, s[i], w);
            for (std::int64_t k = 0; k < ext; ++k) data[static_cast<std::size_t>(start + k * stride)] = buf[static_cast<std::size_t>(k)];
        });
    }
}

}  // namespace

void analysis_step(const Scaling& s, int n, const Wavelet& w, const std::vector<double>& fine_in,
                   std::vector<double>& coarse, std::vector<double>& det) {
    Grid fine(s, n + 1), crs(s, n);
    require(static_cast<std::int64_t>(fine_in.size()) == fine.size(), "analysis: size mismatch");
    std::vector<double> data = fine_in;
    transform_axes(fine, data, s, w, true);
    int npsi = (1 << s.total()) - 1;
    coarse.assign(static_cast<std::size_t>(crs.size()), 0.0);
    det.assign(static_cast<std::size_t>(npsi * crs.size()), 0.0);
    for (std::int64_t f = 0; f < fine.size(); ++f) {
        Index q = fine.unflatten(f), k{};
        MultiIndex e{};
        for (int i = 0; i < s.dim(); ++i) {
            auto ui = static_cast<std::size_t>(i);
            k[ui] = q[ui] >> s[i];
            e[ui] = static_cast<int>(q[ui] & ((1 << s[i]) - 1));
        }
        int p = psi_index(s, e);
        std::int64_t c = crs.flatten(k);
        if (p < 0)
            coarse[static_cast<std::size_t>(c)] = data[static_cast<std::size_t>(f)];
        else
            det[static_cast<std::size_t>(p * crs.size() + c)] = data[static_cast<std::size_t>(f)];
    }
}

std::vector<double> synthesis_step(const Scaling& s, int n, const Wavelet& w, const std::vector<double>& coarse,
                                   const std::vector<double>* det) {
    Grid fine(s, n + 1), crs(s, n);
    require(static_cast<std::int64_t>(coarse.size()) == crs.size(), "synthesis: size mismatch");
    std::vector<double> data(static_cast<std::size_t>(fine.size()), 0.0);
    for (std::int64_t f = 0; f < fine.size(); ++f) {
        Index q = fine.unflatten(f), k{};
        MultiIndex e{};
        for (int i = 0; i < s.dim(); ++i) {
            auto ui = static_cast<std::size_t>(i);
            k[ui] = q[ui] >> s[i];
            e[ui] = static_cast<int>(q[ui] & ((1 << s[i]) - 1));
        }
        int p = psi_index(s, e);
        std::int64_t c = crs.flatten(k);
        if (p < 0)
            data[static_cast<std::size_t>(f)] = coarse[static_cast<std::size_t>(c)];
        else if (det)
            data[static_cast<std::size_t>(f)] = (*det)[static_cast<std::size_t>(p * crs.size() + c)];
    }
    transform_axes(fine, data, s, w, false);
    return data;
}

Pyramid analyze(const std::vector<double>& coeffs, const Scaling& s, int N, const Wavelet& w) {
    Grid g(s, N);
    require(static_cast<std::int64_t>(coeffs.size()) == g.size(),
            "transform: sample count must be 2^{N|s|} = " + std::to_string(g.size()));
    Pyramid p(s, N);
    std::vector<double> cur = coeffs, coarse;
    for (int n = N - 1; n >= 0; --n) {
        analysis_step(s, n, w, cur, coarse, p.details[static_cast<std::size_t>(n)]);
        cur.swap(coarse);
    }
    p.base = cur;
    return p;
}

std::vector<double> synthesize_level(const Pyramid& p, int n, const Wavelet& w) {
    require(n >= 0 && n <= p.levels, "synthesize_level: level out of range");
    std::vector<double> cur = p.base;
    for (int m = 0; m < n; ++m) cur = synthesis_step(p.scaling, m, w, cur, &p.details[static_cast<std::size_t>(m)]);
    return cur;
}

std::vector<double> refine(const std::vector<double>& coeffs, const Scaling& s, int from, int to, const Wavelet& w) {
    std::vector<double> cur = coeffs;
    for (int m = from; m < to; ++m) cur = synthesis_step(s, m, w, cur, nullptr);
    return cur;
}

Pyramid forward_transform(const std::vector<double>& samples, const Scaling& s, int N, const Wavelet& w) {
    Grid g(s, N);
    auto n = static_cast<std::int64_t>(samples.size());
    require(n == g.size(), "forward_transform: sample count " + std::to_string(n) + " is not 2^{N|s|} = " +
                               std::to_string(g.size()));
    double sc = std::pow(2.0, -0.5 * N * s.total());
    std::vector<double> c(samples.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = sc * samples[i];
    return analyze(c, s, N, w);
}

std::vector<double> inverse_transform(const Pyramid& p, const Wavelet& w) {
    require(p.base.size() == 1 && static_cast<int>(p.details.size()) == p.levels, "inverse_transform: shape mismatch");
    for (int n = 0; n < p.levels; ++n)
        require(static_cast<std::int64_t>(p.details[static_cast<std::size_t>(n)].size()) == p.num_psi() * p.level_size(n),
                "inverse_transform: shape mismatch at level " + std::to_string(n));
    std::vector<double> c = synthesize_level(p, p.levels, w);
    double sc = std::pow(2.0, 0.5 * p.levels * p.scaling.total());
    for (double& v : c) v *= sc;
    return c;
}

Pyramid project(const Pyramid& p, int n, Subspace which) {
    require(n >= 0 && n < p.levels, "project: level out of range");
    Pyramid q(p.scaling, p.levels);
    if (which == Subspace::V) {
        q.base = p.base;
        for (int m = 0; m < n; ++m) q.details[static_cast<std::size_t>(m)] = p.details[static_cast<std::size_t>(m)];
    } else {
        q.details[static_cast<std::size_t>(n)] = p.details[static_cast<std::size_t>(n)];
    }
    return q;
}

namespace {

double component(const Wavelet& w, int e, int lv, double u_scaled) {
    return std::pow(2.0, 0.5 * lv) * w.local(e, u_scaled);
}

}  // namespace

double basis_value(const Wavelet& w, const Scaling& s, BasisKind kind, int n, const Point& x, int psi, const Point& y) {
    MultiIndex e{};
    if (kind == BasisKind::Mother) e = psi_local(s, psi);
    double v = 1.0;
    for (int i = 0; i < s.dim(); ++i) {
        auto ui = static_cast<std::size_t>(i);
        int lv = n * s[i];
        v *= component(w, e[ui], lv, std::ldexp(y[ui] - x[ui], lv));
        if (v == 0.0) return 0.0;
    }
    return v;
}

std::vector<double> eval_basis(const Wavelet& w, const Scaling& s, BasisKind kind, int n, const Index& x, int psi,
                               const std::vector<Point>& queries) {
    Grid g(s, n);
    if (kind == BasisKind::Mother) require(psi >= 0 && psi < (1 << s.total()) - 1, "eval_basis: psi out of range");
    MultiIndex e{};
    if (kind == BasisKind::Mother) e = psi_local(s, psi);
    Point xp = g.point(x);
    std::vector<double> out;
    out.reserve(queries.size());
    for (const Point& y : queries) {
        double v = 1.0;
        for (int i = 0; i < s.dim() && v != 0.0; ++i) {
            auto ui = static_cast<std::size_t>(i);
            int lv = n * s[i];
            double P = std::ldexp(1.0, lv);
            double u = std::ldexp(y[ui] - xp[ui], lv);
            u = std::fmod(u, P);
            if (u < 0) u += P;
            double lo, hi;
            w.local_support(e[ui], lo, hi);
            double acc = 0;
            for (double t = u; t <= hi; t += P) acc += w.local(e[ui], t);
            v *= std::pow(2.0, 0.5 * lv) * acc;
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> point_values(const std::vector<double>& coeffs, const Scaling& s, int N, const Wavelet& w) {
    Grid g(s, N);
    require(static_cast<std::int64_t>(coeffs.size()) == g.size(), "point_values: size mismatch");
    std::vector<double> data = coeffs, buf, out;
    const auto& phi = w.father_at_integers();
    for (int i = 0; i < s.dim(); ++i) {
        double sc = std::pow(2.0, 0.5 * N * s[i]);
        for_each_line(g, i, [&](std::int64_t start, std::int64_t stride, std::int64_t ext) {
            buf.resize(static_cast<std::size_t>(ext));
            out.assign(static_cast<std::size_t>(ext), 0.0);
            for (std::int64_t k = 0; k < ext; ++k) buf[static_cast<std::size_t>(k)] = data[static_cast<std::size_t>(start + k * stride)];
            for (std::int64_t j = 0; j < ext; ++j) {
                double acc = 0;
                for (std::size_t t = 0; t < phi.size(); ++t) {
                    std::int64_t src = ((j - static_cast<std::int64_t>(t)) % ext + ext) % ext;
                    acc += phi[t] * buf[static_cast<std::size_t>(src)];
                }
                out[static_cast<std::size_t>(j)] = sc * acc;
            }
            for (std::int64_t k = 0; k < ext; ++k) data[static_cast<std::size_t>(start + k * stride)] = out[static_cast<std::size_t>(k)];
        });
    }
    return data;
}

namespace {

constexpr std::uint32_t kRsbfVersion = 1;

}  // namespace

void write_rsbf(std::ostream& os, const Pyramid& p) {
    os.write("RSBF", 4);
    put_u32(os, kRsbfVersion);
    put_u32(os, static_cast<std::uint32_t>(p.scaling.dim()));
    for (int v : p.scaling.exponents()) put_u32(os, static_cast<std::uint32_t>(v));
    put_u32(os, static_cast<std::uint32_t>(p.levels));
    for (double v : p.base) put_f64(os, v);
    for (auto& d : p.details)
        for (double v : d) put_f64(os, v);
}

Pyramid read_rsbf(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "RSBF", 4) != 0) throw PreconditionError("rsbf: bad magic");
    std::uint32_t ver = get_u32(is);
    require(ver == kRsbfVersion, "rsbf: unsupported version " + std::to_string(ver));
    std::uint32_t d = get_u32(is);
    require(d >= 1 && d <= static_cast<std::uint32_t>(kMaxDim), "rsbf: bad dimension");
    std::vector<int> s(d);
    for (auto& v : s) v = static_cast<int>(get_u32(is));
    int N = static_cast<int>(get_u32(is));
    Pyramid p(Scaling(s), N);
    for (double& v : p.base) v = get_f64(is);
    for (auto& lv : p.details)
        for (double& v : lv) v = get_f64(is);
    return p;
}

void save_rsbf(const std::string& path, const Pyramid& p) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), "rsbf: cannot open " + path);
    write_rsbf(os, p);
}

Pyramid load_rsbf(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), "rsbf: cannot open " + path);
    return read_rsbf(is);
}

}  // namespace rsb
