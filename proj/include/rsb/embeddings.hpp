#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rsb/modelled.hpp"

namespace rsb {

struct EllEmbed {
    double lhs = 0;  // ||u / 2^{-n dt}||_{l^pt_n}
    double rhs = 0;  // ||u / 2^{-n d}||_{l^p_n}
};

// requires 1 <= p <= pt, d > 0, dt <= d - |s|(1/p - 1/pt)
EllEmbed ell_embed(const std::vector<double>& u, const Scaling& s, int n, double p, double delta, double pt,
                   double delta_t);

struct EmbeddingCase {
    int id = 1;
    double gamma = 0, p = 2, q = 2;
    double gamma_t = 0, p_t = 2, q_t = 2;
};

// throws unless (source, target) fit case `id`; case 4 at the critical gamma'
// needs the homogeneity gap
void check_case(const EmbeddingCase& c, const Structure& st);

struct LadderRung {
    double zeta = 0;
    double p_zeta = 0;   // zeta = gamma - |s|(1/p - 1/p_zeta), inf if unsolvable
    double sup_norm = 0; // sup_n ||fbar^n_zeta||_{l^{p_zeta}_n}
};

struct EmbedReport {
    EmbeddingCase c;
    int N = 0;
    double source = 0, target = 0, ratio = 0;
    std::vector<LadderRung> ladder;  // case 4 only

    static void write_header(std::ostream& os);
    void write_row(std::ostream& os) const;
};

// fbar restricted to T_{<gamma'}
AveragedMD restrict_below(const AveragedMD& fb, const Model& M, double gamma_t);

EmbedReport embed_check(const AveragedMD& fb, const Model& M, const EmbeddingCase& c);

// ensembles on the polynomial structure
// averaged lift of a random Besov field of regularity gamma + 0.25
AveragedMD random_lifted(const Model& M, double gamma, std::uint64_t seed);
// averaged Taylor jet of a random trigonometric polynomial, mode k weighted by |k|^{-gamma-1}
AveragedMD random_jet(const Model& M, double gamma, std::uint64_t seed, int modes = 6);

}  // namespace rsb
