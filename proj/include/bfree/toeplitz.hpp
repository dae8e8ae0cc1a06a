#pragma once

#include "bfree/bset.hpp"
#include "bfree/holes.hpp"
#include "bfree/residueset.hpp"

#include <string>
#include <vector>

namespace bfree {

// A Toeplitz sequence given by its period skeleton instead of a divisibility
// structure: per level a period p_k, the residues mod p_k that are still
// unfilled after that level, and the periodic word assigning bits to the
// filled positions.
enum class ToeplitzKind { gh_variant, skeleton };

struct SkeletonLevel {
    Int p = 1;                // p_{k-1} divides p_k
    std::vector<Int> holes;   // sorted residues in [0, p)
    std::string fill;         // length p over {'0','1','-'}; '-' exactly on holes
};

struct DirectToeplitzSpec {
    ToeplitzKind kind = ToeplitzKind::gh_variant;
    std::vector<SkeletonLevel> levels;  // skeleton form only; level k at index k-1
    std::string name;
};

// How much of the level structure was actually verified.  Nesting of the
// hole sets is checked exactly (by residue arithmetic) for the first three
// levels; a skeleton reaching deeper carries those levels as user-asserted.
// Fill words are fully checked: every bit inherited from a coarser level
// must reappear unchanged, and '-' must mark exactly the declared holes.
struct ToeplitzValidation {
    long nesting_checked_up_to = 0;
    bool user_asserted_beyond = false;
    std::vector<std::string> notes;
};

ToeplitzValidation validate_direct_spec(const DirectToeplitzSpec& spec);

// Number of declared levels for the skeleton form; -1 for the gh_variant,
// whose levels are generated on demand at any depth.
long direct_level_count(const DirectToeplitzSpec& spec);

// Period of level n: 2^{2n+1} for the gh_variant, the declared p for a
// skeleton.
Int direct_period(const DirectToeplitzSpec& spec, long n);

// The unfilled positions after level n, as a residue set mod the level
// period.  The gh_variant holes form the single class 4^n*Z - r_n with
// r_n = (4^n - 1)/3, stored at its natural period 4^n inside modulus
// 2^{2n+1}.  Levels start at 1.
ResidueSet direct_holes(const DirectToeplitzSpec& spec, long n);

struct DirectSegment {
    BitWindow window;              // unresolved positions carry bit 0
    std::vector<Int> unresolved;   // positions in [lo, hi) still open at the budget
};

// Evaluate the sequence on [lo, hi) by resolving each position at the first
// level that fills it, trying levels 1..level_budget.  Positions that are
// still holes at the budget level are listed instead of being guessed, and
// raising the budget never changes a bit that was already resolved.
//
// The gh_variant fill rule is frozen as: the member 4^{n-1}*(4t - k) - r_{n-1}
// of the level-(n-1) hole set is filled at level n with bit t mod 2, for
// k in {0,2,3}; k = 1 stays a hole.  Any consistent alternation yields the
// same hole sets and periods; this choice is the documented one.
DirectSegment direct_eta_segment(const DirectToeplitzSpec& spec, const Int& lo, const Int& hi,
                                 long level_budget);

// Essential holes of the direct spec by the defining iteration: classes
// mod p_N that meet the hole set of every deeper level up to n_max.  Same
// result contract as the filtration-based computation.
EssentialIterativeResult direct_essential_holes(const DirectToeplitzSpec& spec, long N, long n_max,
                                                long stab_window = 2);

}  // namespace bfree
