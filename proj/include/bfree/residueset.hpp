#pragma once

#include "bfree/intset.hpp"

#include <vector>

namespace bfree {

// A periodic subset of Z presented as residues modulo an ambient modulus.
// The set is stored through an internal period dividing the modulus: the
// residues list lives in [0, period) and the set is the union of r + period*Z
// over stored r.  Useful because the natural hole sets are often t-periodic
// for a t that is many orders of magnitude below the ambient level modulus,
// and all queries can be answered from the compressed form.
struct ResidueSet {
    Int modulus = 1;             // ambient modulus; set is read in Z/modulus
    Int period = 1;              // divides modulus
    std::vector<Int> residues;   // sorted, distinct, in [0, period)

    bool empty() const { return residues.empty(); }
    // Number of residues in [0, modulus).
    Int count() const { return Int(residues.size()) * (modulus / period); }
};

ResidueSet make_residue_set(Int modulus, Int period, std::vector<Int> residues);

// Convenience: full stored period (period == modulus).
ResidueSet residue_set_mod(Int modulus, std::vector<Int> residues);

bool rs_contains(const ResidueSet& s, const Int& x);

// Re-present with a coarser stored period t (period | t | modulus).
ResidueSet rs_refine(const ResidueSet& s, const Int& t);

// All residues in [0, modulus); guarded by cap on the result size.
std::vector<Int> rs_full_residues(const ResidueSet& s, std::size_t cap = 50'000'000);

// { x + k : x in s }, same modulus and period.
ResidueSet rs_shift(const ResidueSet& s, const Int& k);

// Binary operations require equal moduli; the result is stored modulo the
// lcm of the two internal periods.
ResidueSet rs_intersect(const ResidueSet& a, const ResidueSet& b);
ResidueSet rs_union(const ResidueSet& a, const ResidueSet& b);
ResidueSet rs_difference(const ResidueSet& a, const ResidueSet& b);

bool rs_equal(const ResidueSet& a, const ResidueSet& b);
bool rs_subset(const ResidueSet& a, const ResidueSet& b);

// Does s meet the progression r + m*Z?
bool rs_meets_progression(const ResidueSet& s, const Int& r, const Int& m);

// Smallest period: the least t (a divisor of the stored period, hence of the
// modulus) with s + t = s.  Empty sets and the full set have period 1.
Int rs_minimal_period(const ResidueSet& s);

// Re-store the set at its minimal period (drops duplicate translates).
ResidueSet rs_compress(const ResidueSet& s);

}  // namespace bfree
