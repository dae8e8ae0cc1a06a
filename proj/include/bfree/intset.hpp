#pragma once

#include "bfree/ints.hpp"

#include <vector>

namespace bfree {

// A finite set of positive integers, kept sorted and duplicate-free.  These
// sets play the role of generator sets for unions of arithmetic progressions
// ("sets of multiples"), so every operation below is defined relative to the
// set of multiples it generates.
using IntSet = std::vector<Int>;

// Sort, deduplicate, and validate positivity.
IntSet make_set(std::vector<Int> values);

bool set_contains(const IntSet& a, const Int& x);

IntSet set_union(const IntSet& a, const IntSet& b);

// lcm of all elements; lcm of the empty set is 1.
Int lcm_of(const IntSet& a);

Int gcd_of(const IntSet& a);

// { a / gcd(a, k) : a in A }.  One element of the transformed set divides m
// exactly when the original element divides k*m, which is what makes this the
// right change of variables when slicing a set of multiples along k*Z.
IntSet div_transform(const IntSet& a, const Int& k);

// Elements coprime to k.
IntSet perp_subset(const IntSet& a, const Int& k);

// Remove every element that is a proper multiple of another element.  The
// result generates the same set of multiples and is divisibility-minimal.
IntSet primitivize(const IntSet& a);

// True when no element divides a different one (1-element and empty sets are
// primitive).  On failure also reports one offending (divisor, multiple) pair.
struct PrimitivityReport {
    bool primitive = true;
    Int divisor = 0;
    Int multiple = 0;
};
PrimitivityReport check_primitive(const IntSet& a);

// Does some element of A divide x?
bool in_multiples(const IntSet& a, const Int& x);

}  // namespace bfree
