#include "bfree/automorphism.hpp"

#include "bfree/arith.hpp"
#include "bfree/ints.hpp"

#include <algorithm>
#include <stdexcept>

namespace bfree {

namespace {

// lcm of the generators with index <= ell; cheap substitute for a full level
// computation (saturation never changes the lcm).
Int level_lcm(const BSetSpec& spec, long ell) {
    Int l = 1;
    for (long k = 1; k <= ell; ++k)
        for (int slot : generator_slots(spec, k)) {
            const auto v = generator_value(spec, k, slot);
            if (!v) throw std::invalid_argument("level " + std::to_string(ell) +
                                                " is beyond the realized horizon");
            l = lcm(l, *v);
        }
    return l;
}

void check_phase(const PhasedWindow& w) {
    if (w.phase_modulus < 1) throw std::invalid_argument("phase modulus must be positive");
    if (w.phase < 0 || w.phase >= w.phase_modulus)
        throw std::invalid_argument("phase outside [0, modulus)");
}

}  // namespace

Int BlockMap::radius() const {
    if (kind == Kind::shift_power) return Int(std::max(shift, 0L));
    return q;
}

BlockMap shift_power(long k) {
    BlockMap m;
    m.kind = BlockMap::Kind::shift_power;
    m.shift = k;
    return m;
}

BlockMap f_ell_map(const BSetSpec& spec, long ell) {
    validate_spec(spec);
    if (spec.family != Family::B1Cut)
        throw std::invalid_argument("the finite-order map needs the square-extended family");
    if (ell < 1) throw std::invalid_argument("level index must be at least 1");
    if (spec.cutoff >= 0 && ell >= spec.cutoff)
        throw std::invalid_argument("level " + std::to_string(ell) +
                                    " has no square generator (cutoff " +
                                    std::to_string(spec.cutoff) + ")");
    if (ell > spec.horizon)
        throw std::invalid_argument("level " + std::to_string(ell) +
                                    " is beyond the realized horizon");

    BlockMap m;
    m.kind = BlockMap::Kind::f_ell;
    m.ell = ell;
    m.p_ell = level_lcm(spec, ell);
    m.c_ell = spec.c[static_cast<std::size_t>(ell - 1)];
    if (m.p_ell % m.c_ell != 0)
        throw std::logic_error("level lcm not divisible by the level parameter");
    m.q = m.p_ell / m.c_ell;
    return m;
}

PhasedWindow phased_eta(const BSetSpec& spec, const Int& k, const Int& lo, const Int& hi,
                        const Int& phase_modulus) {
    PhasedWindow w;
    w.window = eta_segment(spec, lo + k, hi + k);
    w.window.start = lo;
    w.phase_modulus = phase_modulus;
    w.phase = mod_floor(k, phase_modulus);
    return w;
}

PhasedWindow apply_block_map(const BlockMap& map, const PhasedWindow& input) {
    check_phase(input);
    const Int lo = input.window.start;
    const Int hi = input.window.end_exclusive();

    PhasedWindow out;
    out.phase_modulus = input.phase_modulus;

    if (map.kind == BlockMap::Kind::shift_power) {
        const Int out_lo = lo + Int(std::max(-map.shift, 0L));
        const Int out_hi = hi - Int(std::max(map.shift, 0L));
        if (out_hi <= out_lo)
            throw std::invalid_argument("window too short for a shift by " +
                                        std::to_string(map.shift));
        out.window.start = out_lo;
        out.window.bits.reserve(checked_size_t(out_hi - out_lo, "shifted window"));
        for (Int s = out_lo; s < out_hi; ++s) out.window.bits.push_back(input.window.at(s + map.shift));
        out.phase = mod_floor(input.phase + map.shift, input.phase_modulus);
        return out;
    }

    if (input.phase_modulus != map.p_ell)
        throw std::invalid_argument("phase tracked mod " + to_string(input.phase_modulus) +
                                    " but the map lives at level lcm " + to_string(map.p_ell));
    const Int out_hi = hi - map.q;
    if (out_hi <= lo)
        throw std::invalid_argument("window too short: the map reads " + to_string(map.q) +
                                    " positions ahead");
    out.window.start = lo;
    out.window.bits.reserve(checked_size_t(out_hi - lo, "mapped window"));
    for (Int s = lo; s < out_hi; ++s) {
        const bool swapped = mod_floor(s + input.phase, map.c_ell) == 0;
        out.window.bits.push_back(input.window.at(swapped ? s + map.q : s));
    }
    // The induced rotation of the cyclic factor adds q: the rotation element
    // is divisible by every level generator except the square one, where its
    // coordinate is q -- and q itself satisfies all those congruences.
    out.phase = mod_floor(input.phase + map.q, map.p_ell);
    return out;
}

CommutationReport verify_commutation(const BlockMap& map, const BSetSpec& spec, long k_max,
                                     const Int& half_width) {
    if (k_max < 0) throw std::invalid_argument("k range must be non-negative");
    if (half_width < 1) throw std::invalid_argument("half width must be positive");
    const Int pm = map.kind == BlockMap::Kind::f_ell ? map.p_ell : Int(1);
    const Int pad = map.radius() + Int(std::max(-map.shift, 0L)) + 1;

    CommutationReport rep;
    rep.k_max = k_max;
    rep.half_width = half_width;

    const PhasedWindow base =
        phased_eta(spec, 0, -half_width - k_max - pad, half_width + k_max + pad, pm);
    const PhasedWindow f_eta = apply_block_map(map, base);

    for (long k = -k_max; k <= k_max; ++k) {
        const PhasedWindow in_k =
            phased_eta(spec, k, -half_width - pad, half_width + pad, pm);
        const PhasedWindow out_k = apply_block_map(map, in_k);
        for (Int s = out_k.window.start; s < out_k.window.end_exclusive(); ++s) {
            if (!f_eta.window.in_range(s + k)) continue;
            if (out_k.window.at(s) != f_eta.window.at(s + k)) {
                rep.ok = false;
                rep.witness = true;
                rep.witness_k = k;
                rep.witness_s = s;
                return rep;
            }
        }
    }
    return rep;
}

OrderReport verify_order(const BlockMap& map, const BSetSpec& spec, long order, Int half_width) {
    if (order < 1) throw std::invalid_argument("order must be at least 1");
    if (half_width == 0) half_width = Int(2) * order * std::max<Int>(map.radius(), 1);
    if (half_width < 1) throw std::invalid_argument("half width must be positive");

    OrderReport rep;
    rep.order = order;

    const Int pm = map.kind == BlockMap::Kind::f_ell ? map.p_ell : Int(1);
    const PhasedWindow eta = phased_eta(spec, 0, -half_width, half_width + 1, pm);

    PhasedWindow cur = eta;
    bool all_lower_refuted = true;
    for (long i = 1; i <= order; ++i) {
        cur = apply_block_map(map, cur);
        bool equal = true;
        Int first_diff = 0;
        for (Int s = cur.window.start; s < cur.window.end_exclusive(); ++s)
            if (cur.window.at(s) != eta.window.at(s)) {
                equal = false;
                first_diff = s;
                break;
            }
        if (i < order) {
            if (equal) {
                rep.unrefuted.push_back(i);
                all_lower_refuted = false;
            } else {
                rep.refuted.emplace_back(i, first_diff);
            }
        } else {
            rep.identity_at_order = equal;
            if (!equal) rep.order_mismatch_pos = first_diff;
            rep.overlap_lo = cur.window.start;
            rep.overlap_hi = cur.window.end_exclusive();
        }
    }
    rep.ok = rep.identity_at_order && all_lower_refuted;
    return rep;
}

RotationReport verify_rotation(const BSetSpec& spec, long ell, const Int& half_width) {
    if (half_width < 1) throw std::invalid_argument("half width must be positive");
    const BlockMap map = f_ell_map(spec, ell);

    RotationReport rep;
    rep.window_lo = -half_width;
    rep.window_hi = half_width + 1;
    rep.rotation_modulus = (Int(1) << (ell - 1)) * map.c_ell * map.c_ell;
    rep.rotation_residue = map.q;

    const PhasedWindow f_eta = apply_block_map(
        map, phased_eta(spec, 0, -half_width, half_width + map.q + 1, map.p_ell));

    BResidues y;
    y.base = 0;
    y.overrides.emplace_back(rep.rotation_modulus, rep.rotation_residue);
    const PhiCodeResult code = phi_code(spec, y, -half_width, half_width + 1);
    rep.certified = code.certified;

    for (Int s = -half_width; s <= half_width; ++s)
        if (f_eta.window.at(s) != code.window.at(s)) {
            rep.mismatch = true;
            rep.mismatch_pos = s;
            break;
        }
    rep.ok = !rep.mismatch && rep.certified;
    return rep;
}

WindowShiftReport verify_window_shift(const BSetSpec& spec, long ell, long n, long t) {
    if (n < 1) throw std::invalid_argument("block half-length n must be positive");
    if (t < ell)
        throw std::invalid_argument("need t >= ell: the congruence lives at level t");
    if ((Int(1) << t) <= n)
        throw std::invalid_argument("need 2^t > n for the block identity to apply");

    const BlockMap map = f_ell_map(spec, ell);
    const Int p_t = level_lcm(spec, t);

    WindowShiftReport rep;
    rep.n = n;
    rep.t = t;

    const auto sol = crt({{0, p_t / map.c_ell}, {mod_floor(map.q, map.p_ell), map.p_ell}});
    if (!sol)
        throw std::domain_error("window-shift congruences are inconsistent; "
                                "the spec does not carry the square structure");
    rep.z = sol->first;

    const PhasedWindow f_eta =
        apply_block_map(map, phased_eta(spec, 0, Int(-n), Int(n) + map.q + 1, map.p_ell));
    const BitWindow shifted = eta_segment(spec, rep.z - n, rep.z + n + 1);

    for (Int s = -n; s <= n; ++s)
        if (f_eta.window.at(s) != shifted.at(s + rep.z)) {
            rep.mismatch = true;
            rep.mismatch_pos = s;
            break;
        }
    rep.ok = !rep.mismatch;
    return rep;
}

}  // namespace bfree
