#pragma once

#include "bfree/arith.hpp"
#include "bfree/residueset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bfree {

// Supported generator-set families.  Each one describes an infinite set of
// pairwise-interacting generators from finitely many parameters; `horizon`
// says how many generator indices are realized (available exactly).
//
//   B1               { 2^k c_k }                            c odd, pairwise coprime
//   B1Cut            { 2^k c_k } + { 2^(k-1) c_k^2 : k < N } (N = cutoff; no cutoff = all k)
//   B2               { 2^k c_k } + { 3^k d_k }              lcm(c_k,d_k) pairwise coprime, coprime to 6
//   ProductChain     b_1 = q_1 c_1, b_2 = q_2 c_2, b_m = q_1..q_(m-2) q_m c_m
//   TwoFiltrations   { 2^i q_i c_i, 2^i q_i d_i, 2^(i+1) q_i }
//   Explicit         a finite list, taken as the whole set
enum class Family { Explicit, B1, B1Cut, B2, ProductChain, TwoFiltrations };

std::string family_name(Family f);

struct BSetSpec {
    Family family = Family::Explicit;
    std::vector<Int> c, d, q;    // family parameter lists (d empty means d = c)
    long cutoff = -1;            // B1Cut only; -1 = no cutoff (square term at every index)
    std::vector<Int> explicit_b; // Explicit only
    long horizon = 0;            // realized generator indices 1..horizon
    long window = 1000;          // default half-width for eta displays
    std::string name;            // diagnostic label
};

// Throws std::invalid_argument with a specific message on any violated
// family constraint (coprimality, parity, list lengths, primitivity).
void validate_spec(const BSetSpec& spec);

// Which sub-generators exist at a given index (0 = main, 1/2 = family extras).
std::vector<int> generator_slots(const BSetSpec& spec, long index);

// Exact value; nullopt when the index is beyond the realized horizon.
std::optional<Int> generator_value(const BSetSpec& spec, long index, int slot);

// All realized generator values, ascending index/slot order, deduplicated.
IntSet realized_generators(const BSetSpec& spec);

// Strict lower bound for every unrealized generator value, or nullopt when
// everything is realized (Explicit).  Monotone in the index, so this is the
// bound for the first unrealized index.
std::optional<Int> min_unrealized_value(const BSetSpec& spec);

// True when the family shape alone proves no unrealized generator divides m.
// Every unrealized generator carries a prime-power or realized-prefix factor
// that grows with the index (2^k, 3^k, or q_1...q_(k-2)), so once that factor
// fails to divide m, no deeper generator can divide m either.  This certifies
// divisor scans over much larger targets than the raw value bound allows.
bool no_unrealized_divisor(const BSetSpec& spec, const Int& m);

// gcd(generator(index, slot), m).  Defined beyond the horizon as well
// whenever the family guarantees the unrealized parameter factors are
// coprime to m (m must divide a product of powers of 2, 3 and realized
// parameters -- true for every level lcm this library forms).  Returns
// nullopt when the value cannot be pinned down (Explicit beyond horizon).
std::optional<Int> generator_gcd_with(const BSetSpec& spec, long index, int slot, const Int& m);

struct BitWindow {
    Int start = 0;
    std::vector<std::uint8_t> bits;

    Int end_exclusive() const { return start + Int(bits.size()); }
    bool in_range(const Int& pos) const { return pos >= start && pos < end_exclusive(); }
    std::uint8_t at(const Int& pos) const;
};

// Characteristic window of the generator-free integers: bit 1 at s exactly
// when no generator divides s.  Requires the horizon to certify every
// position (all generators up to max(|lo|,|hi|) realized); the error names
// the first position that cannot be certified.
BitWindow eta_segment(const BSetSpec& spec, const Int& lo, const Int& hi);

// A point of the odometer restricted to the realized generators: coordinate
// at generator b is `base mod b` unless overridden.
struct BResidues {
    Int base = 0;
    std::vector<std::pair<Int, Int>> overrides;  // (generator value, residue)

    Int at(const Int& b) const;
};

struct PhiCodeResult {
    BitWindow window;
    bool certified = true;      // horizon large enough for the stated rule
    Int required_bound = 0;     // positions certified while |s| + slack < min unrealized value
};

// Coding of an odometer point: bit 1 at s unless s = -y_b (mod b) for some
// generator b.  Certainty follows a conservative rule: all generators up to
// max(|lo|,|hi|) + (largest override modulus) + |base| must be realized.
PhiCodeResult phi_code(const BSetSpec& spec, const BResidues& y, const Int& lo, const Int& hi);

struct TautReport {
    enum class Verdict { taut, not_taut, unknown } verdict = Verdict::unknown;
    Int witness = 0;       // offending generator when not taut / first unverifiable
    std::string detail;
};

// Does removing any single realized generator strictly drop the density of
// the generated set of multiples?  Exact densities only; when they are out
// of budget the verdict is `unknown` (callers degrade to warnings).
TautReport is_taut_truncation(const BSetSpec& spec, const DensityBudget& budget = {});

PrimitivityReport is_primitive(const BSetSpec& spec);

}  // namespace bfree
