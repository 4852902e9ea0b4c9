#include "rsb/wavelet.hpp"

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace rsb {

namespace {

using cld = std::complex<long double>;

// Hoelder exponents of the Daubechies fathers, orders 1..10
constexpr double kHolder[] = {0.0, 0.5500, 1.0878, 1.6179, 1.9690, 2.1891, 2.4604, 2.7608, 3.0736, 3.3614};

std::vector<cld> poly_roots(const std::vector<long double>& c) {
    // c ascending, leading coefficient c.back()
    int deg = static_cast<int>(c.size()) - 1;
    std::vector<cld> roots;
    if (deg < 1) return roots;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -static_cast<double>(c[static_cast<std::size_t>(i)] / c.back());
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < deg; ++i) {
        cld z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
        for (int it = 0; it < 50; ++it) {
            cld p = 0, dp = 0;
            for (int k = deg; k >= 0; --k) {
                dp = dp * z + p;
                p = p * z + c[static_cast<std::size_t>(k)];
            }
            if (std::abs(dp) == 0.0L) break;
            cld step = p / dp;
            z -= step;
            if (std::abs(step) < 1e-30L) break;
        }
        roots.push_back(z);
    }
    return roots;
}

std::vector<double> daubechies_filter(int K) {
    std::vector<long double> P(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) P[static_cast<std::size_t>(k)] = static_cast<long double>(binomial(K - 1 + k, k));
    std::vector<cld> q{cld(1)};
    auto mul = [&](cld root) {  // q *= (z - root)
        std::vector<cld> r(q.size() + 1, cld(0));
        for (std::size_t i = 0; i < q.size(); ++i) {
            r[i + 1] += q[i];
            r[i] -= q[i] * root;
        }
        q = r;
    };
    for (int k = 0; k < K; ++k) mul(cld(-1));
    for (cld y : poly_roots(P)) {
        cld b = 2.0L - 4.0L * y;
        cld disc = std::sqrt(b * b - 4.0L);
        cld z1 = (b + disc) / 2.0L, z2 = (b - disc) / 2.0L;
        mul(std::abs(z1) < 1.0L ? z1 : z2);
    }
    long double sum = 0;
    for (auto& v : q) sum += v.real();
    std::vector<double> h(q.size());
    long double scale = std::sqrt(2.0L) / sum;
    // highest power first gives the usual ordering (D4: 0.483, 0.837, 0.224, -0.129)
    for (std::size_t i = 0; i < q.size(); ++i) h[i] = static_cast<double>(q[q.size() - 1 - i].real() * scale);
    return h;
}

}  // namespace

double Wavelet::holder_exponent(int order) {
    if (order <= 10) return kHolder[order - 1];
    return kHolder[9] + 0.2075 * (order - 10);
}

int Wavelet::minimal_order(int r) {
    int K = std::max(1, r + 1);
    while (holder_exponent(K) < r) ++K;
    return K;
}

Wavelet Wavelet::build(int order, int r, int cascade_levels) {
    require(order >= 1, "wavelet: order must be >= 1");
    require(r >= 0, "wavelet: r must be >= 0");
    int need = minimal_order(r);
    require(order >= need, "wavelet: order " + std::to_string(order) + " too small for r = " + std::to_string(r) +
                               "; minimal admissible order is " + std::to_string(need));
    require(cascade_levels >= 0 && cascade_levels <= 16, "wavelet: cascade levels out of range");

    Wavelet w;
    w.order_ = order;
    w.r_ = r;
    w.R_ = cascade_levels;
    const int K = order, L = 2 * order;
    const double s2 = std::sqrt(2.0);
    w.h_ = daubechies_filter(K);
    w.g_.resize(static_cast<std::size_t>(L));
    for (int k = 0; k < L; ++k) w.g_[static_cast<std::size_t>(k)] = ((k % 2) ? -1.0 : 1.0) * w.h_[static_cast<std::size_t>(L - 1 - k)];

    for (int m = 0; m < K; ++m) {
        double acc = 0;
        for (int k = 0; k + 2 * m < L; ++k) acc += w.h_[static_cast<std::size_t>(k)] * w.h_[static_cast<std::size_t>(k + 2 * m)];
        if (std::abs(acc - (m == 0 ? 1.0 : 0.0)) > 1e-10)
            throw std::runtime_error("wavelet: spectral factorization lost orthonormality at order " + std::to_string(K));
    }

    // father at integers: eigenvector of the refinement matrix for eigenvalue 1
    w.phi_int_.assign(static_cast<std::size_t>(L), 0.0);
    if (K == 1) {
        w.phi_int_[0] = 1.0;
    } else {
        int n = L - 2;
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                int t = 2 * i - j;
                if (t >= 0 && t < L) M(i - 1, j - 1) = s2 * w.h_[static_cast<std::size_t>(t)];
            }
        M -= Eigen::MatrixXd::Identity(n, n);
        M.row(n - 1).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        rhs(n - 1) = 1.0;
        Eigen::VectorXd v = M.fullPivLu().solve(rhs);
        for (int i = 1; i <= n; ++i) w.phi_int_[static_cast<std::size_t>(i)] = v(i - 1);
    }

    // cascade
    std::vector<double> T(w.phi_int_);
    for (int j = 1; j <= w.R_; ++j) {
        std::int64_t len = static_cast<std::int64_t>(L - 1) * (std::int64_t{1} << j) + 1;
        std::int64_t step = std::int64_t{1} << (j - 1);
        std::vector<double> U(static_cast<std::size_t>(len), 0.0);
        for (std::int64_t k = 0; k < len; ++k) {
            double acc = 0;
            for (int t = 0; t < L; ++t) {
                std::int64_t idx = k - t * step;
                if (idx >= 0 && idx < static_cast<std::int64_t>(T.size()))
                    acc += w.h_[static_cast<std::size_t>(t)] * T[static_cast<std::size_t>(idx)];
            }
            U[static_cast<std::size_t>(k)] = s2 * acc;
        }
        T.swap(U);
    }
    w.phi_tab_ = T;
    std::int64_t len = static_cast<std::int64_t>(T.size());
    std::int64_t full = std::int64_t{1} << w.R_;
    w.psi_tab_.assign(T.size(), 0.0);
    for (std::int64_t k = 0; k < len; ++k) {
        double acc = 0;
        for (int t = 0; t < L; ++t) {
            std::int64_t idx = 2 * k - t * full;
            if (idx >= 0 && idx < len) acc += w.g_[static_cast<std::size_t>(t)] * T[static_cast<std::size_t>(idx)];
        }
        w.psi_tab_[static_cast<std::size_t>(k)] = s2 * acc;
    }

    const int mmax = 24;
    w.mu_.assign(mmax + 1, 0.0);
    w.nu_.assign(mmax + 1, 0.0);
    w.mu_[0] = 1.0;
    for (int m = 1; m <= mmax; ++m) {
        double acc = 0;
        for (int k = 0; k < L; ++k)
            for (int j = 0; j < m; ++j) acc += w.h_[static_cast<std::size_t>(k)] * binomial(m, j) * ipow(k, m - j) * w.mu_[static_cast<std::size_t>(j)];
        w.mu_[static_cast<std::size_t>(m)] = acc * std::ldexp(1.0, -m) / s2 / (1.0 - std::ldexp(1.0, -m));
    }
    for (int m = 0; m <= mmax; ++m) {
        double acc = 0;
        for (int k = 0; k < L; ++k)
            for (int j = 0; j <= m; ++j) acc += w.g_[static_cast<std::size_t>(k)] * binomial(m, j) * ipow(k, m - j) * w.mu_[static_cast<std::size_t>(j)];
        w.nu_[static_cast<std::size_t>(m)] = acc * std::ldexp(1.0, -m) / s2;
    }
    return w;
}

double Wavelet::lookup(const std::vector<double>& tab, double u) const {
    double x = std::ldexp(u, R_);
    if (x < 0.0) return 0.0;
    double last = static_cast<double>(tab.size() - 1);
    if (x > last) return 0.0;
    double fl = std::floor(x);
    auto i = static_cast<std::size_t>(fl);
    double t = x - fl;
    if (t == 0.0 || i + 1 >= tab.size()) return tab[i];
    return (1.0 - t) * tab[i] + t * tab[i + 1];
}

static void split_local(int e, int& j, int& m) {
    j = 0;
    while ((2 << j) <= e) ++j;
    m = e - (1 << j);
}

double Wavelet::local(int e, double u) const {
    if (e == 0) return father(u);
    int j, m;
    split_local(e, j, m);
    return std::pow(2.0, 0.5 * j) * mother(std::ldexp(u, j) - m);
}

void Wavelet::local_support(int e, double& lo, double& hi) const {
    if (e == 0) {
        lo = 0.0;
        hi = support();
        return;
    }
    int j, m;
    split_local(e, j, m);
    lo = std::ldexp(static_cast<double>(m), -j);
    hi = std::ldexp(static_cast<double>(m) + support(), -j);
}

double Wavelet::father_moment(int m) const { return mu_.at(static_cast<std::size_t>(m)); }
double Wavelet::mother_moment(int m) const { return nu_.at(static_cast<std::size_t>(m)); }

double Wavelet::local_moment(int e, int m) const {
    if (e == 0) return father_moment(m);
    int j, mm;
    split_local(e, j, mm);
    double acc = 0;
    for (int i = 0; i <= m; ++i) acc += binomial(m, i) * ipow(mm, m - i) * nu_.at(static_cast<std::size_t>(i));
    return std::pow(2.0, 0.5 * j) * std::ldexp(1.0, -j * (m + 1)) * acc;
}

}  // namespace rsb
