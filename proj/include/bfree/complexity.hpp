#pragma once

#include "bfree/bset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bfree {

// Number of distinct length-n blocks eta[k+1, k+n] with k in [-L, L]: a
// lower bound for the subword complexity rho(n), nondecreasing in both n
// and L.  Needs the window of radius L+n certified, so the horizon rules of
// eta_segment apply.
long rho_window(const BSetSpec& spec, long n, long L);

// The quantities steering the block-counting certificate.  delta is a
// certified lower bound for 1/2 - sum(1/c_i): the realized reciprocals are
// subtracted exactly and the unrealized tail is covered by a declared
// majorant (default: a geometric halving series starting at the last
// realized value -- override when the family grows slower than that).
struct ComplexityParams {
    Rat delta = 0;         // 1/2 - realized_sum - tail_bound
    Rat realized_sum = 0;  // exact sum of 1/c_i over realized indices
    Rat tail_bound = 0;    // the declared or default majorant
    long m_n = 0;          // [lg2 n]
    long j_n = 0;          // greatest j with 2^j c_j < delta*n / (2 lg2 n); 0 = none
    // The threshold comparison runs in long double with a relative guard
    // band; a j falling inside the band is conservatively excluded (smaller
    // j_n means a weaker but still valid bound) and flagged here.
    bool boundary_ambiguous = false;
};

// Requires a family whose generators are exactly {2^i c_i} or
// {2^i c_i, 3^i d_i} and a positive delta; anything else violates the
// assumptions of the counting argument and throws.
ComplexityParams complexity_params(const BSetSpec& spec, long n,
                                   std::optional<Rat> tail = std::nullopt);

// The congruence-witness certificate: one representative tuple r with
// r_j in [0, c_j) for j <= j_n (zero above), each solved for the position
//
//   x_r = 2^j r_j  (mod 2^j c_j)   for j = 1..m_n,
//   x_r = 0        (mod 2^(m_n+1) 3^(m_n+1)),
//
// whose block eta[x_r+1, x_r+n] is computable exactly from the realized
// generators alone: the last congruence pushes every deeper generator's
// multiples outside the block window.  Distinct tuples must yield pairwise
// distinct blocks, so the count certifies rho(n) >= c_1...c_{j_n}.
struct CrtWitnessReport {
    long n = 0;
    long m_n = 0;
    long j_n = 0;
    Int bound = 1;              // c_1...c_{j_n}
    long distinct_blocks = 0;
    bool ok = false;            // distinct_blocks >= bound
    std::vector<std::vector<Int>> tuples;  // the r_1..r_{j_n} per witness
    std::vector<Int> positions;            // x_r, same order
    std::vector<std::vector<std::uint8_t>> blocks;  // eta[x_r+1, x_r+n]
};

CrtWitnessReport crt_witnesses(const BSetSpec& spec, long n,
                               std::optional<Rat> tail = std::nullopt,
                               long enumeration_cap = 100'000);

// Growth-trend table over a range of block lengths.  The exponent proxy
// log(rho)/log(n) rising is evidence for super-polynomial complexity, and
// only evidence -- the caveat string travels with every report.
struct ComplexityRow {
    long n = 0;
    long rho = 0;
    double log_ratio = 0;  // log(rho) / log(n)
    long m_n = -1;         // -1 when the spec has no counting structure
    long j_n = -1;
};

struct ComplexityProfile {
    long L = 0;
    bool has_params = false;  // family fits the counting argument
    Rat delta = 0;
    std::string caveat = "trend evidence, not proof";
    std::vector<ComplexityRow> rows;
};

ComplexityProfile superpoly_report(const BSetSpec& spec, long n_lo, long n_hi, long L,
                                   std::optional<Rat> tail = std::nullopt);

}  // namespace bfree
