#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsb {

constexpr int kMaxDim = 4;

using Point = std::array<double, kMaxDim>;
using Index = std::array<std::int64_t, kMaxDim>;
using MultiIndex = std::array<int, kMaxDim>;

struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
}

class Scaling {
public:
    Scaling() = default;
    explicit Scaling(std::vector<int> s);

    int dim() const { return static_cast<int>(s_.size()); }
    int operator[](int i) const { return s_[static_cast<std::size_t>(i)]; }
    int total() const { return total_; }
    const std::vector<int>& exponents() const { return s_; }

    // max_i |x_i|^{1/s_i}
    double norm(const Point& x) const;
    int degree(const MultiIndex& k) const;

    bool operator==(const Scaling& o) const { return s_ == o.s_; }
    bool operator!=(const Scaling& o) const { return !(*this == o); }

private:
    std::vector<int> s_;
    int total_ = 0;
};

// Lambda_n on the unit torus. Flat indices are row-major with dimension 0 slowest.
class Grid {
public:
    Grid(Scaling s, int level);

    const Scaling& scaling() const { return s_; }
    int level() const { return n_; }
    int dim() const { return s_.dim(); }
    std::int64_t size() const { return size_; }
    std::int64_t extent(int i) const { return ext_[static_cast<std::size_t>(i)]; }
    double spacing(int i) const { return 1.0 / static_cast<double>(extent(i)); }

    // wraps each component periodically
    std::int64_t flatten(const Index& k) const;
    Index unflatten(std::int64_t flat) const;
    // lifted coordinates k_i 2^{-n s_i}, no reduction mod 1
    Point point(const Index& k) const;

    // nearest point of this (coarser) grid to a point of `fine`, in lifted
    // coordinates of this grid; ties round down
    Index nearest_from(const Grid& fine, const Index& k) const;
    // embedding of this grid's index into a finer grid
    Index embed_into(const Grid& fine, const Index& k) const;

private:
    Scaling s_;
    int n_;
    std::array<std::int64_t, kMaxDim> ext_{};
    std::int64_t size_;
};

// iterate over a box of lattice offsets lo..hi (inclusive) per dimension
template <class F>
void for_each_offset(int d, const Index& lo, const Index& hi, F&& fn) {
    Index k = lo;
    for (int i = d; i < kMaxDim; ++i) k[static_cast<std::size_t>(i)] = 0;
    while (true) {
        fn(k);
        int i = d - 1;
        while (i >= 0) {
            auto ui = static_cast<std::size_t>(i);
            if (++k[ui] <= hi[ui]) break;
            k[ui] = lo[ui];
            --i;
        }
        if (i < 0) return;
    }
}

std::vector<MultiIndex> multi_indices_below(const Scaling& s, double bound);

inline double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

double binomial(int n, int k);
double factorial(int n);

inline double monomial(const Point& x, const MultiIndex& k, int d) {
    double r = 1.0;
    for (int i = 0; i < d; ++i) r *= ipow(x[static_cast<std::size_t>(i)], k[static_cast<std::size_t>(i)]);
    return r;
}

inline double mi_factorial(const MultiIndex& k, int d) {
    double r = 1.0;
    for (int i = 0; i < d; ++i) r *= factorial(k[static_cast<std::size_t>(i)]);
    return r;
}

inline bool mi_leq(const MultiIndex& a, const MultiIndex& b, int d) {
    for (int i = 0; i < d; ++i)
        if (a[static_cast<std::size_t>(i)] > b[static_cast<std::size_t>(i)]) return false;
    return true;
}

}  // namespace rsb
