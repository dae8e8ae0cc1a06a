#pragma once

#include "bfree/bset.hpp"

#include <utility>
#include <vector>

namespace bfree {

// A window of some point x of the subshift together with the coordinate of x
// in the level-ell cyclic factor.  The block maps below are not functions of
// the bits alone -- they read that coordinate -- so the pair travels as one
// unit.  For x = sigma^k(eta) the coordinate is k mod the level lcm.
struct PhasedWindow {
    BitWindow window;
    Int phase = 0;
    Int phase_modulus = 1;  // 1 = phase untracked (plain shifts only)
};

// Sliding block maps: powers of the shift, and the explicit finite-order
// centralizer element of the square-extended family.  The latter reads q
// positions ahead on the residue class c_ell*Z - phase and copies everywhere
// else; q = p_ell / c_ell where p_ell is the level-ell lcm.
struct BlockMap {
    enum class Kind { shift_power, f_ell };
    Kind kind = Kind::shift_power;
    long shift = 0;   // shift_power: output s reads input s + shift
    long ell = 0;     // f_ell fields below
    Int q = 0;        // read-ahead distance, p_ell / c_ell
    Int p_ell = 1;    // level lcm; phases are tracked modulo this
    Int c_ell = 1;    // the family parameter at ell; also the map's order

    // Look-ahead consumed on the right edge of a window per application.
    Int radius() const;
};

BlockMap shift_power(long k);

// Builds the level-ell map for a square-extended spec (family B1Cut).
// Requires 1 <= ell <= horizon and ell below the square cutoff, because the
// construction needs the square generator 2^(ell-1) c_ell^2 in the set.
BlockMap f_ell_map(const BSetSpec& spec, long ell);

// sigma^k(eta) on positions [lo, hi] (both ends included, like eta_segment):
// bit at s is eta_{s+k}, phase k mod phase_modulus.
PhasedWindow phased_eta(const BSetSpec& spec, const Int& k, const Int& lo, const Int& hi,
                        const Int& phase_modulus);

// One application.  The output keeps the input's left edge and loses radius()
// columns on the right (a negative shift instead trims the left edge); the
// phase advances by the rotation the map induces on the cyclic factor: the
// shift amount, or q for the finite-order map.  Throws when the window is
// too short to produce a single output column, or when the phase modulus
// does not match the map.
PhasedWindow apply_block_map(const BlockMap& map, const PhasedWindow& input);

// F(sigma^k eta) == sigma^k(F eta) on the overlap, bit for bit, for every
// |k| <= k_max, with windows of half-width w around the origin.  A failure
// carries the first mismatching (k, s).
struct CommutationReport {
    bool ok = true;
    long k_max = 0;
    Int half_width = 0;
    bool witness = false;
    long witness_k = 0;
    Int witness_s = 0;
};
CommutationReport verify_commutation(const BlockMap& map, const BSetSpec& spec, long k_max,
                                     const Int& half_width);

// F^order(eta) == eta on the surviving overlap AND F^i(eta) != eta for every
// 1 <= i < order.  Each application trims radius() columns, so the initial
// half-width must absorb order*radius; 0 picks the default 2*order*radius.
struct OrderReport {
    bool ok = false;
    long order = 0;
    bool identity_at_order = false;
    Int order_mismatch_pos = 0;  // when !identity_at_order: first offending s
    std::vector<std::pair<long, Int>> refuted;  // lower power -> witness position
    std::vector<long> unrefuted;  // lower powers that matched eta everywhere
    Int overlap_lo = 0, overlap_hi = 0;  // positions compared at the deepest power
};
OrderReport verify_order(const BlockMap& map, const BSetSpec& spec, long order,
                         Int half_width = 0);

// F_ell(eta) is the coding of the cyclic-group point with coordinate q at
// the square generator 2^(ell-1) c_ell^2 and 0 everywhere else; checked bit
// for bit on [-w, w].  certified reports whether the coding horizon covered
// the whole window.
struct RotationReport {
    bool ok = false;
    bool certified = true;
    Int window_lo = 0, window_hi = 0;  // half-open comparison range
    bool mismatch = false;
    Int mismatch_pos = 0;
    Int rotation_modulus = 0;  // 2^(ell-1) c_ell^2
    Int rotation_residue = 0;  // q
};
RotationReport verify_rotation(const BSetSpec& spec, long ell, const Int& half_width);

// The whole window moves: (F_ell eta)[-n, n] = eta[-n+z, n+z] for the z
// solving z = 0 mod p_t/c_ell, z = q mod p_ell -- the congruence pair that
// pins the map down on level-t blocks.  Preconditions t >= ell and 2^t > n;
// an inconsistent congruence pair signals a malformed spec and throws.
struct WindowShiftReport {
    bool ok = false;
    Int z = 0;
    long n = 0;
    long t = 0;
    bool mismatch = false;
    Int mismatch_pos = 0;  // s in [-n, n] with (F eta)_s != eta_{s+z}
};
WindowShiftReport verify_window_shift(const BSetSpec& spec, long ell, long n, long t);

}  // namespace bfree
