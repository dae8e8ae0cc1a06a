#pragma once

#include "bfree/bset.hpp"

#include <vector>

namespace bfree {

// Classification of a divisor a = gcd(b, lcm(S)) of a level.  A "source" is a
// generator outside S with that gcd; the distinction between finitely and
// infinitely many sources drives which components survive in the essential
// hole set, so the tag is computed conservatively and cross-checked against
// the family's closed form whenever one exists.
enum class SourceClass { member_of_s, finite_source, infinite_source };

std::string source_class_name(SourceClass c);

struct AEntry {
    Int value;
    SourceClass cls = SourceClass::finite_source;
    long source_count = 0;  // sources seen within the probe horizon
};

struct LevelData {
    long n = 0;
    IntSet S;
    Int ell = 1;  // lcm(S) -- the level modulus
    std::vector<AEntry> A;
    bool saturated = false;
    bool heuristic = false;  // true when classification had no family structure to lean on
};

// Which filtration of a family to use.  `Extended` is meaningful for the
// TwoFiltrations family only: level n additionally contains the next main
// generator, which changes the essential-hole picture.
enum class FiltrationKind { natural, extended };

struct FiltrationOptions {
    FiltrationKind kind = FiltrationKind::natural;
    long stab_threshold = 3;  // sources required before an infinite tag
    long probe_horizon = 0;   // generator indices examined; 0 = automatic
};

// Divisors of the level modulus achieved as gcds, with classification.
void classify_sources(LevelData& lvl, const BSetSpec& spec, const FiltrationOptions& opt = {});

// Replace S by its saturation (adjoin every divisor of the level modulus
// that is itself a generator).  Leaves the modulus unchanged; returns true
// when S grew.  Classification is refreshed when it does.
bool saturate(LevelData& lvl, const BSetSpec& spec, const FiltrationOptions& opt = {});

// The family's standard filtration, levels 1..n_max, each saturated and
// classified.  Throws when the horizon cannot realize the requested levels.
std::vector<LevelData> default_filtration(const BSetSpec& spec, long n_max, const FiltrationOptions& opt = {});

// Values tagged as having infinitely many sources.
IntSet infinite_source_values(const LevelData& lvl);

// Primitivized version of the above (the divisibility-minimal core).
IntSet infinite_source_core(const LevelData& lvl);

}  // namespace bfree
