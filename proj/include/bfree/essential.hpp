#pragma once

#include "bfree/holes.hpp"

#include <vector>

namespace bfree {

// A chain a_N, a_{N+1}, ... of gcd values, one per level, each outside its
// level set and each the gcd of its successor with the current level lcm.
// These chains are what connects a level-N gcd value to arbitrarily deep
// levels, and the essential holes are assembled from them.
struct AASequence {
    long start_level = 0;
    std::vector<Int> values;  // values[i] belongs to level start_level + i

    long depth() const { return static_cast<long>(values.size()) - 1; }
};

// All chains of the given depth starting at a.  Tree search: at each level
// the candidates are the classified gcd values outside S, filtered by the
// gcd-compatibility constraint.  Branches that cannot be extended die; only
// full-depth chains are returned.
std::vector<AASequence> enumerate_aA_sequences(const std::vector<LevelData>& levels, long N,
                                               const Int& a, long depth);

struct SequenceSets {
    IntSet set;             // gcd(b, l_{S_N}) over realized b dividing some a_n v l_{S_N}
    bool truncated = true;  // a finite chain can only witness finitely many levels
    Int scan_bound = 0;     // generators up to this value were consulted
};

// The level-N shadow of one chain: which generators divide some lcm(a_n,
// l_{S_N}), recorded through their gcd with l_{S_N}.  Any such generator is
// bounded by the lcm it divides, so a sufficient horizon makes the scan
// exact; insufficient horizons throw.
SequenceSets S_of_sequence(const AASequence& seq, const BSetSpec& spec,
                           const std::vector<LevelData>& levels);

struct SOfAResult {
    IntSet set;            // primitive
    bool computed = true;  // false when the combination count exceeded the cap
    long sequence_count = 0;
};

// Combine the shadows of all depth-d chains from a: one element of each
// chain's set, lcm'd together, then primitivized.  The arithmetic
// description of the essential holes removes exactly the multiples of this
// set from a*Z.
SOfAResult S_of_a(const BSetSpec& spec, const std::vector<LevelData>& levels, long N, const Int& a,
                  long depth, long combination_cap = 100'000);

struct EssentialComponent {
    Int a;
    IntSet S_a;
    long sequence_count = 0;
};

struct EssentialArithmeticResult {
    ResidueSet set;  // modulus p_N
    std::vector<EssentialComponent> components;
    bool depth_stable = false;  // unchanged when recomputed one level deeper
};

// Essential holes at level N assembled arithmetically: the union of
// a*Z \ M_{S_N(a)} over the values a classified as having infinitely many
// sources.  Every component must be non-empty; an empty one means the
// classification or the depth was wrong, and throws.  When depth + 1 is
// also within the computed levels the result is recomputed one level deeper
// and depth_stable reports agreement.
EssentialArithmeticResult essential_holes_arithmetic(const BSetSpec& spec,
                                                     const std::vector<LevelData>& levels, long N,
                                                     long depth);

struct ShortcutReport {
    bool holds = true;
    bool scan_complete = true;  // horizon covered every divisor candidate
    long n = 0;                 // witness (when !holds): the deeper level,
    Int a = 0;                  //   its gcd value,
    Int b = 0;                  //   and the generator dividing lcm(a, l_{S_N})
};

// Divisor test that shortcuts the whole chain machinery: if no generator
// outside S_N divides lcm(l_{S_N}, a') for any deeper infinite-source value
// a', then every S_N(a) collapses to S_N and the essential holes are just
// M_{A^inf} \ M_{S_N}.
ShortcutReport gh_shortcut_check(const BSetSpec& spec, const std::vector<LevelData>& levels,
                                 long N, long n_max);

}  // namespace bfree
