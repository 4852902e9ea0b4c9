#include "rsb/structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rsb {

std::string poly_name(const MultiIndex& k, int d) {
    std::string n = "X^(";
    for (int i = 0; i < d; ++i) {
        if (i) n += ",";
        n += std::to_string(k[static_cast<std::size_t>(i)]);
    }
    return n + ")";
}

Structure::Structure(Scaling s, std::vector<Symbol> symbols) : s_(std::move(s)), sym_(std::move(symbols)) {
    // parents refer to positions before sorting
    std::vector<int> order(sym_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return sym_[static_cast<std::size_t>(a)].hom < sym_[static_cast<std::size_t>(b)].hom - 1e-12;
    });
    std::vector<int> inv(sym_.size());
    std::vector<Symbol> sorted;
    for (std::size_t i = 0; i < order.size(); ++i) {
        inv[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
        sorted.push_back(sym_[static_cast<std::size_t>(order[i])]);
    }
    for (auto& sy : sorted)
        if (sy.parent >= 0) sy.parent = inv[static_cast<std::size_t>(sy.parent)];
    sym_ = std::move(sorted);
    for (const auto& sy : sym_) {
        if (sy.polynomial())
            require(std::abs(sy.hom - s_.degree(sy.k)) < 1e-12, "structure: polynomial homogeneity must equal its scaled degree");
        if (sy.kind == SymbolKind::Integrated) require(sy.parent >= 0, "structure: integrated symbol without parent");
    }
}

Structure Structure::polynomial(const Scaling& s, double gamma) {
    require(gamma > 0, "polynomial structure: gamma must be > 0");
    std::vector<Symbol> v;
    for (const auto& k : multi_indices_below(s, gamma)) {
        Symbol sy;
        sy.name = poly_name(k, s.dim());
        sy.hom = s.degree(k);
        sy.k = k;
        v.push_back(sy);
    }
    return Structure(s, v);
}

Structure Structure::noise(const Scaling& s, double alpha, double gamma) {
    require(alpha < 0, "noise structure: alpha must be < 0");
    require(gamma >= 0, "noise structure: gamma must be >= 0");
    std::vector<Symbol> v;
    Symbol xi;
    xi.name = "Xi";
    xi.hom = alpha;
    xi.kind = SymbolKind::Noise;
    v.push_back(xi);
    for (const auto& k : multi_indices_below(s, gamma)) {
        Symbol sy;
        sy.name = poly_name(k, s.dim());
        sy.hom = s.degree(k);
        sy.k = k;
        v.push_back(sy);
    }
    return Structure(s, v);
}

std::vector<double> Structure::homogeneities() const {
    std::vector<double> h;
    for (const auto& sy : sym_)
        if (h.empty() || std::abs(h.back() - sy.hom) > 1e-12) h.push_back(sy.hom);
    return h;
}

std::vector<int> Structure::sector(double zeta) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (std::abs(sym_[static_cast<std::size_t>(i)].hom - zeta) < 1e-12) out.push_back(i);
    return out;
}

int Structure::find_poly(const MultiIndex& k) const {
    for (int i = 0; i < size(); ++i) {
        const auto& sy = sym_[static_cast<std::size_t>(i)];
        if (sy.polynomial() && sy.k == k) return i;
    }
    return -1;
}

int Structure::find(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (sym_[static_cast<std::size_t>(i)].name == name) return i;
    return -1;
}

bool Structure::has_homogeneity(double g, double tol) const {
    for (const auto& sy : sym_)
        if (std::abs(sy.hom - g) <= tol) return true;
    return false;
}

double Structure::max_polynomial_degree() const {
    double m = 0;
    for (const auto& sy : sym_)
        if (sy.polynomial()) m = std::max(m, sy.hom);
    return m;
}

Structure Structure::truncate(double gamma, std::vector<int>* map) const {
    std::vector<Symbol> v;
    std::vector<int> keep, newidx(sym_.size(), -1);
    for (int i = 0; i < size(); ++i)
        if (sym_[static_cast<std::size_t>(i)].hom < gamma) {
            newidx[static_cast<std::size_t>(i)] = static_cast<int>(keep.size());
            keep.push_back(i);
        }
    for (int i : keep) {
        Symbol sy = sym_[static_cast<std::size_t>(i)];
        if (sy.parent >= 0) {
            sy.parent = newidx[static_cast<std::size_t>(sy.parent)];
            require(sy.parent >= 0, "structure: truncation drops the parent of " + sy.name);
        }
        v.push_back(sy);
    }
    if (map) *map = keep;
    Structure t;
    t.s_ = s_;
    t.sym_ = v;
    return t;
}

double Structure::sector_norm(const double* coeffs, double zeta) const {
    double m = 0;
    for (int i = 0; i < size(); ++i)
        if (std::abs(sym_[static_cast<std::size_t>(i)].hom - zeta) < 1e-12) m = std::max(m, std::abs(coeffs[i]));
    return m;
}

std::string Structure::manifest() const {
    std::ostringstream os;
    os.precision(17);
    os << "structure d=" << s_.dim() << " s=";
    for (int i = 0; i < s_.dim(); ++i) os << (i ? "," : "") << s_[i];
    os << " symbols=" << size() << "\n";
    const char* kinds[] = {"polynomial", "noise", "integrated"};
    for (const auto& sy : sym_) {
        os << sy.name << " " << sy.hom << " " << kinds[static_cast<int>(sy.kind)];
        if (sy.parent >= 0) os << " parent=" << sym_[static_cast<std::size_t>(sy.parent)].name;
        os << "\n";
    }
    return os.str();
}

}  // namespace rsb
