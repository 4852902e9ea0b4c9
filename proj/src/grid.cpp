#include "rsb/grid.hpp"

#include <algorithm>
#include <functional>

namespace rsb {

Scaling::Scaling(std::vector<int> s) : s_(std::move(s)) {
    require(!s_.empty() && s_.size() <= static_cast<std::size_t>(kMaxDim),
            "scaling: dimension must be in 1.." + std::to_string(kMaxDim));
    for (int v : s_) {
        require(v >= 1, "scaling: every exponent must be >= 1");
        total_ += v;
    }
}

double Scaling::norm(const Point& x) const {
    double m = 0.0;
    for (int i = 0; i < dim(); ++i)
        m = std::max(m, std::pow(std::abs(x[static_cast<std::size_t>(i)]), 1.0 / s_[static_cast<std::size_t>(i)]));
    return m;
}

int Scaling::degree(const MultiIndex& k) const {
    int r = 0;
    for (int i = 0; i < dim(); ++i) r += s_[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
    return r;
}

Grid::Grid(Scaling s, int level) : s_(std::move(s)), n_(level) {
    require(level >= 0, "grid: negative level");
    require(static_cast<long>(level) * s_.total() <= 40, "grid: level too large");
    size_ = 1;
    for (int i = 0; i < s_.dim(); ++i) {
        ext_[static_cast<std::size_t>(i)] = std::int64_t{1} << (level * s_[i]);
        size_ *= ext_[static_cast<std::size_t>(i)];
    }
    for (int i = s_.dim(); i < kMaxDim; ++i) ext_[static_cast<std::size_t>(i)] = 1;
}

std::int64_t Grid::flatten(const Index& k) const {
    std::int64_t f = 0;
    for (int i = 0; i < dim(); ++i) {
        auto ui = static_cast<std::size_t>(i);
        std::int64_t m = ext_[ui];
        std::int64_t v = k[ui] % m;
        if (v < 0) v += m;
        f = f * m + v;
    }
    return f;
}

Index Grid::unflatten(std::int64_t flat) const {
    Index k{};
    for (int i = dim() - 1; i >= 0; --i) {
        auto ui = static_cast<std::size_t>(i);
        k[ui] = flat % ext_[ui];
        flat /= ext_[ui];
    }
    return k;
}

Point Grid::point(const Index& k) const {
    Point x{};
    for (int i = 0; i < dim(); ++i) {
        auto ui = static_cast<std::size_t>(i);
        x[ui] = static_cast<double>(k[ui]) / static_cast<double>(ext_[ui]);
    }
    return x;
}

Index Grid::nearest_from(const Grid& fine, const Index& k) const {
    require(fine.level() >= n_ && fine.scaling() == s_, "nearest: grid mismatch");
    Index q{};
    for (int i = 0; i < dim(); ++i) {
        auto ui = static_cast<std::size_t>(i);
        int sh = (fine.level() - n_) * s_[i];
        if (sh == 0) {
            q[ui] = k[ui];
            continue;
        }
        std::int64_t base = k[ui] >> sh;
        std::int64_t rem = k[ui] - (base << sh);
        q[ui] = rem > (std::int64_t{1} << (sh - 1)) ? base + 1 : base;
    }
    return q;
}

Index Grid::embed_into(const Grid& fine, const Index& k) const {
    Index q{};
    for (int i = 0; i < dim(); ++i) {
        auto ui = static_cast<std::size_t>(i);
        q[ui] = k[ui] << ((fine.level() - n_) * s_[i]);
    }
    return q;
}

std::vector<MultiIndex> multi_indices_below(const Scaling& s, double bound) {
    std::vector<MultiIndex> out;
    int d = s.dim();
    MultiIndex k{};
    // enumerate by increasing scaled degree, then lexicographically
    int maxdeg = static_cast<int>(std::ceil(bound)) + 1;
    std::vector<MultiIndex> all;
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == d) {
            all.push_back(k);
            return;
        }
        for (int v = 0; v * s[i] <= left; ++v) {
            k[static_cast<std::size_t>(i)] = v;
            rec(i + 1, left - v * s[i]);
        }
        k[static_cast<std::size_t>(i)] = 0;
    };
    rec(0, maxdeg);
    for (auto& m : all)
        if (s.degree(m) < bound) out.push_back(m);
    std::stable_sort(out.begin(), out.end(),
                     [&](const MultiIndex& a, const MultiIndex& b) { return s.degree(a) < s.degree(b); });
    return out;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace rsb
