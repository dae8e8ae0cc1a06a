#pragma once

#include "bfree/bset.hpp"
#include "bfree/residueset.hpp"

#include <cstddef>

namespace bfree {

// Ground-truth implementations used by the property tests.  They answer the
// same questions as the main path but from the definitions, one integer at a
// time: a residue class is all-zero exactly when a level generator divides
// it, all-one exactly when no realized generator's gcd with the level
// modulus divides it, and a hole otherwise.  No compressed periods, no
// component decomposition, no family closed forms.

// Exact hole set of the (saturated) natural level n, scanned over a full
// period.  Refuses when the period exceeds the cap or when the horizon
// leaves a generator of value <= p_n unrealized (the gcd scan could miss a
// divisor then).
ResidueSet naive_holes(const BSetSpec& spec, long n, std::size_t sieve_cap = 50'000'000);

// Same decision procedure on an arbitrary window [lo, hi): bit i reports
// whether lo + i is a hole.  For levels whose period is too large to scan in
// full.
BitWindow naive_holes_window(const BSetSpec& spec, long n, const Int& lo, const Int& hi);

// As above but for a caller-supplied level set (covers non-standard
// filtrations).  The set is saturated here regardless of what was passed.
ResidueSet naive_holes_in(const BSetSpec& spec, const IntSet& level_set,
                          std::size_t sieve_cap = 50'000'000);
BitWindow naive_holes_window_in(const BSetSpec& spec, const IntSet& level_set, const Int& lo,
                                const Int& hi);

// Minimal period by shifting a full bitmap of the set, one divisor of the
// modulus at a time.  Empty sets report 1.
Int naive_min_period(const ResidueSet& s, std::size_t cap = 50'000'000);

// Number of distinct length-n blocks fully contained in the window.
long naive_rho(const BitWindow& bits, long n);

}  // namespace bfree
