#pragma once

#include "bfree/filtration.hpp"
#include "bfree/residueset.hpp"

#include <string>
#include <vector>

namespace bfree {

// One arm of the hole set at a level: the multiples of a single gcd value a
// that avoid every generator of S.  The arm equals a * (Z \ M_D) for the
// reduced set D = primitivize({ s / gcd(s, a) : s in S }), so it is periodic
// with the much smaller period a * lcm(D) and can be sieved there instead of
// over the full level modulus.
struct HoleComponent {
    Int a;
    IntSet reduced;   // primitivized division transform of S by a
    Int period;       // a * lcm(reduced); divides the level modulus
    ResidueSet arm;   // the component itself, ambient modulus = level lcm
};

struct HolesReport {
    long n = 0;
    Int p = 1;        // lcm(S_n): ambient modulus of everything below
    ResidueSet holes; // multiples of the gcd set that escape M_S, compressed
    std::vector<HoleComponent> components;
    std::vector<std::string> warnings;
};

// Hole set of one saturated level.  Tautness of the realized truncation is a
// hypothesis of the formula; when it cannot be certified within the density
// budget the computation still runs but the report carries a warning so
// callers can fall back to oracle-only comparisons.
HolesReport holes_level(const BSetSpec& spec, const LevelData& level);

// a*Z \ M_C inside Z/modulus, stored at its natural period
// a * lcm(primitivize(C / gcd(., a))).  Empty when some c divides a.
ResidueSet multiples_avoiding(const Int& a, const IntSet& C, const Int& modulus);

struct EssentialCertificate {
    bool stabilized = false;
    long level = 0;  // first level after which nothing changed, or n_max
};

struct EssentialIterativeResult {
    ResidueSet set;  // ambient modulus p_N
    EssentialCertificate cert;
    // Residue count (mod p_N) after filtering against each level N..n_max.
    std::vector<Int> survivor_counts;
};

// Essential holes by the defining iteration: start from the level-N holes and
// keep the classes k + p_N*Z that meet the hole set of every deeper computed
// level.  The result is exact for the computed range; the certificate says
// whether the set went unchanged for `stab_window` consecutive levels (it
// must stabilize eventually, but no finite computation can bound where).
EssentialIterativeResult essential_holes_iterative(const BSetSpec& spec,
                                                   const std::vector<LevelData>& levels,
                                                   long N, long n_max,
                                                   long stab_window = 2);

struct PeriodReport {
    Int tau = 1;
    // "direct-search", "singleton-formula" or "union-formula"
    std::string certified_by;
};

// Exhaustive scan over the divisors of the stored period.
PeriodReport minimal_period(const ResidueSet& s);

// Minimal period of a*Z \ M_C, computed in closed form.  Throws when a is a
// multiple of some c (the set would be empty).
Int period_formula_singleton(const Int& a, const IntSet& C);

struct UnionHypothesis {
    bool ok = true;
    Int offender = 0;     // the a in A that breaks the certificate
    std::string reason;   // "A-not-primitive", "contains-1" or "period-below-lcm"
    Int period = 0;       // true minimal period of M_A \ M_C when determined
    Int lcm_all = 0;      // lcm(A and C): the formula's candidate value
    // Values a whose division transform loses part of its lcm under
    // primitivization.  Harmless on its own (another component can supply the
    // missing factors), which is why ok is decided on the period, not here.
    IntSet coarse_transforms;
};

// Certificate for the union period formula.  Needs A primitive and every a
// outside M_C; the minimal period of M_A \ M_C is then the lcm of the
// single-arm periods, and the formula value lcm(A and C) is certified
// exactly when the two agree.
UnionHypothesis union_formula_hypothesis(const IntSet& A, const IntSet& C);

// Minimal period of M_A \ M_C under the hypothesis above; throws with the
// offending value otherwise.
Int period_formula_union(const IntSet& A, const IntSet& C);

// Formula values cross-checked against a direct search on an explicitly
// sieved set; throws if the two disagree.
PeriodReport period_report_singleton(const Int& a, const IntSet& C, const ResidueSet& s);
PeriodReport period_report_union(const IntSet& A, const IntSet& C, const ResidueSet& s);

}  // namespace bfree
