#pragma once

#include "bfree/bset.hpp"
#include "bfree/toeplitz.hpp"

#include <optional>
#include <string>

namespace bfree {

// A parsed spec file: either a generator-family spec or a direct Toeplitz
// skeleton, plus the optional extras consumed by specific analyses.
struct LoadedSpec {
    bool direct = false;            // true: `toeplitz` carries the payload
    BSetSpec bset;                  // valid when !direct
    DirectToeplitzSpec toeplitz;    // valid when direct
    std::optional<Rat> tail_bound;  // declared unrealized-reciprocal majorant
    std::string name;
};

// Line-oriented `key = value` document with `#` comments.  Values are
// integers, quoted strings, or single-line integer lists `[a, b, c]`.
//
//   family     explicit | b1 | b1_squares | b2 | product_chain |
//              two_filtrations | gh_variant | skeleton
//   name       optional label (defaults to the file stem)
//   horizon    realized generator indices (generator families only)
//   window     default eta display half-width (optional, 1000)
//   params.c/.d/.q   family parameter lists
//   params.N   square-term cutoff for b1_squares ("inf" or omitted = none)
//   params.b   the explicit generator list
//   tail_bound rational "a/b" (or integer) for the complexity margin
//   level.<k>.p / .holes / .fill   skeleton levels, k = 1, 2, ...
//
// Keys that the declared family does not consume are errors, as are missing
// required keys; the loaded spec is validated before it is returned.
LoadedSpec parse_spec_text(const std::string& text, const std::string& source_name = "spec");

LoadedSpec load_spec_file(const std::string& path);

// Directory holding the bundled spec files: the BFREE_SPEC_DIR environment
// variable when set, else the compile-time anchor.
std::string bundled_spec_dir();

}  // namespace bfree
