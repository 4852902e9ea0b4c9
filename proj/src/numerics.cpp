#include "rsb/numerics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsb {

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 16) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "slope_fit: need two points");
    double n = static_cast<double>(x.size()), mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

bool is_inf(double p) { return std::isinf(p); }

double weighted_pnorm(const std::vector<double>& u, double weight, double p) {
    if (is_inf(p)) {
        double m = 0;
        for (double v : u) m = std::max(m, std::abs(v));
        return m;
    }
    std::vector<double> t(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) t[i] = std::pow(std::abs(u[i]), p);
    return std::pow(weight * pairwise_sum(t), 1.0 / p);
}

namespace {

std::vector<double> fft_product(const std::vector<double>& a, const std::vector<double>& b,
                                const std::vector<std::int64_t>& ext, bool conj_a) {
    int d = static_cast<int>(ext.size());
    std::vector<int> dims(ext.begin(), ext.end());
    std::size_t n = a.size();
    std::size_t last = static_cast<std::size_t>(dims.back());
    std::size_t nc = n / last * (last / 2 + 1);
    double* ra = fftw_alloc_real(n);
    double* rb = fftw_alloc_real(n);
    fftw_complex* ca = fftw_alloc_complex(nc);
    fftw_complex* cb = fftw_alloc_complex(nc);
    fftw_plan pa = fftw_plan_dft_r2c(d, dims.data(), ra, ca, FFTW_ESTIMATE);
    fftw_plan pb = fftw_plan_dft_r2c(d, dims.data(), rb, cb, FFTW_ESTIMATE);
    fftw_plan pi = fftw_plan_dft_c2r(d, dims.data(), ca, ra, FFTW_ESTIMATE);
    std::copy(a.begin(), a.end(), ra);
    std::copy(b.begin(), b.end(), rb);
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::size_t i = 0; i < nc; ++i) {
        double xr = ca[i][0], xi = conj_a ? -ca[i][1] : ca[i][1];
        double yr = cb[i][0], yi = cb[i][1];
        ca[i][0] = xr * yr - xi * yi;
        ca[i][1] = xr * yi + xi * yr;
    }
    fftw_execute(pi);
    std::vector<double> out(ra, ra + n);
    for (double& v : out) v /= static_cast<double>(n);
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pi);
    fftw_free(ra);
    fftw_free(rb);
    fftw_free(ca);
    fftw_free(cb);
    return out;
}

}  // namespace

std::vector<double> circular_convolve(const std::vector<double>& a, const std::vector<double>& b,
                                      const std::vector<std::int64_t>& extents) {
    return fft_product(a, b, extents, false);
}

std::vector<double> circular_correlate(const std::vector<double>& a, const std::vector<double>& b,
                                       const std::vector<std::int64_t>& extents) {
    // sum_y a[y] b[y - x] = sum_y a[y + x] b[y]; spectrum conj(B) A, so swap roles
    return fft_product(b, a, extents, true);
}

std::vector<double> spectral_derivative(const std::vector<double>& a, const std::vector<std::int64_t>& extents,
                                        const std::vector<double>& period, const MultiIndex& k) {
    int d = static_cast<int>(extents.size());
    std::vector<int> dims(extents.begin(), extents.end());
    std::size_t n = a.size();
    std::size_t last = static_cast<std::size_t>(dims.back());
    std::size_t half = last / 2 + 1, nc = n / last * half;
    double* ra = fftw_alloc_real(n);
    fftw_complex* ca = fftw_alloc_complex(nc);
    fftw_plan pf = fftw_plan_dft_r2c(d, dims.data(), ra, ca, FFTW_ESTIMATE);
    fftw_plan pb = fftw_plan_dft_c2r(d, dims.data(), ca, ra, FFTW_ESTIMATE);
    std::copy(a.begin(), a.end(), ra);
    fftw_execute(pf);
    int total = 0;
    for (int i = 0; i < d; ++i) total += k[static_cast<std::size_t>(i)];
    for (std::size_t idx = 0; idx < nc; ++idx) {
        // unflatten over dims[0..d-2] x half
        std::size_t rem = idx;
        double fac = 1.0;
        for (int i = d - 1; i >= 0; --i) {
            std::size_t len = i == d - 1 ? half : static_cast<std::size_t>(dims[static_cast<std::size_t>(i)]);
            auto m = static_cast<std::int64_t>(rem % len);
            rem /= len;
            int ki = k[static_cast<std::size_t>(i)];
            if (ki == 0) continue;
            std::int64_t Ni = dims[static_cast<std::size_t>(i)];
            if (m > Ni / 2) m -= Ni;
            if (2 * m == Ni && ki % 2 == 1) fac = 0.0;
            fac *= ipow(2.0 * M_PI * static_cast<double>(m) / period[static_cast<std::size_t>(i)], ki);
        }
        // multiply by i^total
        double re = ca[idx][0] * fac, im = ca[idx][1] * fac;
        switch (total % 4) {
            case 1: ca[idx][0] = -im; ca[idx][1] = re; break;
            case 2: ca[idx][0] = -re; ca[idx][1] = -im; break;
            case 3: ca[idx][0] = im; ca[idx][1] = -re; break;
            default: ca[idx][0] = re; ca[idx][1] = im;
        }
    }
    fftw_execute(pb);
    std::vector<double> out(ra, ra + n);
    for (double& v : out) v /= static_cast<double>(n);
    fftw_destroy_plan(pf);
    fftw_destroy_plan(pb);
    fftw_free(ra);
    fftw_free(ca);
    return out;
}

}  // namespace rsb
