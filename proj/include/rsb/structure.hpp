#pragma once

#include <string>
#include <vector>

#include "rsb/grid.hpp"

namespace rsb {

enum class SymbolKind { Polynomial, Noise, Integrated };

struct Symbol {
    std::string name;
    double hom = 0;
    SymbolKind kind = SymbolKind::Polynomial;
    MultiIndex k{};   // polynomial symbols
    int parent = -1;  // integrated symbols: index of tau in I(tau)
    bool polynomial() const { return kind == SymbolKind::Polynomial; }
};

// Graded basis, ordered by homogeneity (stable).
class Structure {
public:
    Structure() = default;
    Structure(Scaling s, std::vector<Symbol> symbols);

    static Structure polynomial(const Scaling& s, double gamma);
    // Xi at alpha plus X^k, |k|_s < gamma
    static Structure noise(const Scaling& s, double alpha, double gamma);

    const Scaling& scaling() const { return s_; }
    int size() const { return static_cast<int>(sym_.size()); }
    const Symbol& operator[](int i) const { return sym_[static_cast<std::size_t>(i)]; }
    const std::vector<Symbol>& symbols() const { return sym_; }

    std::vector<double> homogeneities() const;
    // basis indices of the sector T_zeta
    std::vector<int> sector(double zeta) const;
    int find_poly(const MultiIndex& k) const;
    int find(const std::string& name) const;
    bool has_homogeneity(double g, double tol = 1e-9) const;
    double max_polynomial_degree() const;

    // symbols with homogeneity < gamma; `map` receives old index per new index
    Structure truncate(double gamma, std::vector<int>* map = nullptr) const;
    // |tau|_zeta: max of the sector coefficients
    double sector_norm(const double* coeffs, double zeta) const;
    std::string manifest() const;

private:
    Scaling s_;
    std::vector<Symbol> sym_;
};

std::string poly_name(const MultiIndex& k, int d);

}  // namespace rsb
