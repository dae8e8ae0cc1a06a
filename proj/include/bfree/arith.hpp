#pragma once

#include "bfree/intset.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace bfree {

// Intersection of two arithmetic progressions r + lZ and s + mZ.
// Empty unless gcd(l, m) | r - s; otherwise the intersection is x + LZ with
// L = lcm(l, m).  g = gcd(x, L) is returned because the gcd of any point of
// the intersection with L equals lcm(gcd(r, l), gcd(s, m)); callers rely on
// that identity, so it is asserted here rather than recomputed downstream.
struct ProgressionMeet {
    Int x;  // canonical representative in [0, L)
    Int L;  // lcm of the two moduli
    Int g;  // gcd(x, L)
};
std::optional<ProgressionMeet> progression_intersect(const Int& r, const Int& l, const Int& s, const Int& m);

// Simultaneous congruences x = r_i (mod m_i) with arbitrary (not necessarily
// coprime) moduli.  Returns the smallest non-negative solution together with
// lcm of the moduli, or nothing if the system is inconsistent.
std::optional<std::pair<Int, Int>> crt(const std::vector<std::pair<Int, Int>>& congruences);

// Natural density of the set of multiples of A, as an exact rational.
// Inclusion-exclusion over subsets is used up to `subset_cap` elements; past
// that a one-period sieve is attempted when lcm(A) <= sieve_bound.  Returns
// nothing when both routes are out of reach -- the caller must treat the
// density as unknown rather than approximate it.
struct DensityBudget {
    std::size_t subset_cap = 20;
    Int sieve_bound = Int(1) << 26;
};
std::optional<Rat> density_of_multiples(const IntSet& a, const DensityBudget& budget = {});

// |{ k in [0, m) : some element of A divides k }| for m a multiple of lcm(A)
// -- exact count used by the sieve route and by tests.
Int count_multiples_in(const IntSet& a, const Int& m);

}  // namespace bfree
