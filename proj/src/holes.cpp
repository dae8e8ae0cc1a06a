#include "bfree/holes.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace bfree {

namespace {

// Positions in [0, span) hit by no element of D.  span must be a common
// multiple of D so the result describes a full period of Z \ M_D.
std::vector<Int> free_positions(const IntSet& D, const Int& span) {
    const std::size_t m = checked_size_t(span, "hole component period");
    std::vector<char> hit(m, 0);
    for (const Int& d : D) {
        const std::size_t step = checked_size_t(d, "hole component generator");
        for (std::size_t i = 0; i < m; i += step) hit[i] = 1;
    }
    std::vector<Int> out;
    for (std::size_t i = 0; i < m; ++i)
        if (!hit[i]) out.push_back(Int(i));
    return out;
}

const LevelData& level_at(const std::vector<LevelData>& levels, long n) {
    for (const LevelData& lvl : levels)
        if (lvl.n == n) return lvl;
    throw std::invalid_argument("no data for level " + std::to_string(n));
}

}  // namespace

ResidueSet multiples_avoiding(const Int& a, const IntSet& C, const Int& modulus) {
    if (a < 1) throw std::invalid_argument("multiples_avoiding: a must be positive");
    const IntSet reduced = primitivize(div_transform(C, a));
    if (set_contains(reduced, Int(1))) return make_residue_set(modulus, 1, {});
    const Int span = lcm_of(reduced);
    const Int period = a * span;
    if (modulus % period != 0)
        throw std::logic_error("multiples_avoiding: arm period does not divide the modulus");
    std::vector<Int> scaled;
    for (Int& r : free_positions(reduced, span)) scaled.push_back(a * r);
    return make_residue_set(modulus, period, std::move(scaled));
}

HolesReport holes_level(const BSetSpec& spec, const LevelData& level) {
    if (!level.saturated)
        throw std::invalid_argument("holes_level: level " + std::to_string(level.n) +
                                    " is not saturated");

    HolesReport rep;
    rep.n = level.n;
    rep.p = level.ell;

    // The set-difference formula assumes the realized truncation is taut.  A
    // primitive realized set always is: dropping any element leaves a
    // non-empty periodic difference, which has positive density.  Only when
    // primitivity fails do we need the density comparison, and only when that
    // runs out of budget does the result become conditional.
    if (!is_primitive(spec).primitive) {
        const TautReport taut = is_taut_truncation(spec);
        if (taut.verdict == TautReport::Verdict::not_taut) {
            rep.warnings.push_back("realized generator set is not taut (generator " +
                                   to_string(taut.witness) +
                                   " is redundant); the hole formula describes the taut core");
        } else if (taut.verdict == TautReport::Verdict::unknown) {
            rep.warnings.push_back(
                "tautness unverified within the density budget; cross-check against the oracle");
        }
    }

    ResidueSet acc = make_residue_set(level.ell, 1, {});
    for (const AEntry& entry : level.A) {
        if (entry.cls == SourceClass::member_of_s) continue;
        const Int& a = entry.value;
        IntSet reduced = primitivize(div_transform(level.S, a));
        if (set_contains(reduced, Int(1))) {
            rep.warnings.push_back("gcd value " + to_string(a) +
                                   " is itself a multiple of S; its component is empty");
            continue;
        }
        HoleComponent comp;
        comp.a = a;
        comp.reduced = std::move(reduced);
        const Int span = lcm_of(comp.reduced);
        comp.period = a * span;
        if (level.ell % comp.period != 0)
            throw std::logic_error("hole component period does not divide the level modulus");

        std::vector<Int> scaled;
        for (Int& r : free_positions(comp.reduced, span)) scaled.push_back(a * r);
        comp.arm = make_residue_set(level.ell, comp.period, std::move(scaled));
        acc = rs_union(acc, comp.arm);
        rep.components.push_back(std::move(comp));
    }
    rep.holes = rs_compress(acc);
    return rep;
}

EssentialIterativeResult essential_holes_iterative(const BSetSpec& spec,
                                                   const std::vector<LevelData>& levels,
                                                   long N, long n_max, long stab_window) {
    if (N < 1 || n_max < N)
        throw std::invalid_argument("essential_holes_iterative: need 1 <= N <= n_max");

    const LevelData& base = level_at(levels, N);
    const Int pN = base.ell;

    EssentialIterativeResult res;
    ResidueSet current = holes_level(spec, base).holes;
    res.survivor_counts.push_back(current.count());

    long last_change = N;
    for (long n = N + 1; n <= n_max; ++n) {
        const ResidueSet deeper = holes_level(spec, level_at(levels, n)).holes;
        // Whether k + pN*Z meets the deeper hole set depends on k only modulo
        // gcd(t_n, pN), so widen the working period to keep the filter exact.
        const Int g = gcd(deeper.period, pN);
        const ResidueSet widened = rs_refine(current, lcm(current.period, g));
        std::vector<Int> kept;
        for (const Int& r : widened.residues)
            if (rs_meets_progression(deeper, r, pN)) kept.push_back(r);
        ResidueSet next = make_residue_set(pN, widened.period, std::move(kept));
        if (!rs_equal(next, current)) last_change = n;
        current = std::move(next);
        res.survivor_counts.push_back(current.count());
    }

    res.set = rs_compress(current);
    if (n_max - last_change >= stab_window) {
        res.cert.stabilized = true;
        res.cert.level = last_change;
    } else {
        res.cert.stabilized = false;
        res.cert.level = n_max;
    }
    return res;
}

PeriodReport minimal_period(const ResidueSet& s) {
    return PeriodReport{rs_minimal_period(s), "direct-search"};
}

Int period_formula_singleton(const Int& a, const IntSet& C) {
    if (a < 1) throw std::invalid_argument("period_formula_singleton: a must be positive");
    if (in_multiples(C, a))
        throw std::domain_error("period_formula_singleton: " + to_string(a) +
                                " is a multiple of a generator, so a*Z \\ M_C is empty");
    return a * lcm_of(primitivize(div_transform(C, a)));
}

UnionHypothesis union_formula_hypothesis(const IntSet& A, const IntSet& C) {
    UnionHypothesis h;
    h.lcm_all = lcm_of(set_union(A, C));
    const PrimitivityReport pa = check_primitive(A);
    if (!pa.primitive) {
        h.ok = false;
        h.offender = pa.multiple;
        h.reason = "A-not-primitive";
        return h;
    }
    // With A primitive and every a outside M_C, each arm a*Z \ M_C contains a
    // itself, forcing a | T for the minimal period T of the union; the union
    // is then exactly as periodic as its arms combined.
    Int sharp = 1;
    for (const Int& a : A) {
        const IntSet D = div_transform(C, a);
        if (set_contains(D, Int(1))) {
            h.ok = false;
            h.offender = a;
            h.reason = "contains-1";
            return h;
        }
        const Int full = lcm_of(D);
        const Int kept = lcm_of(primitivize(D));
        if (kept != full) h.coarse_transforms.push_back(a);
        sharp = lcm(sharp, a * kept);
    }
    h.period = sharp;
    if (sharp != h.lcm_all) {
        h.ok = false;
        // Some arm's lcm collapsed under primitivization and nothing else
        // restored the lost factors: the lcm(A and C) value overstates T.
        for (const Int& a : A)
            if (lcm(sharp, a * lcm_of(div_transform(C, a))) != sharp) {
                h.offender = a;
                break;
            }
        h.reason = "period-below-lcm";
    }
    return h;
}

Int period_formula_union(const IntSet& A, const IntSet& C) {
    const UnionHypothesis h = union_formula_hypothesis(A, C);
    if (!h.ok)
        throw std::domain_error("period_formula_union: hypothesis fails at " +
                                to_string(h.offender) + " (" + h.reason + ")");
    return h.lcm_all;
}

PeriodReport period_report_singleton(const Int& a, const IntSet& C, const ResidueSet& s) {
    const Int f = period_formula_singleton(a, C);
    const Int d = rs_minimal_period(s);
    if (f != d)
        throw std::logic_error("singleton period formula disagrees with direct search: " +
                               to_string(f) + " vs " + to_string(d));
    return PeriodReport{f, "singleton-formula"};
}

PeriodReport period_report_union(const IntSet& A, const IntSet& C, const ResidueSet& s) {
    const Int f = period_formula_union(A, C);
    const Int d = rs_minimal_period(s);
    if (f != d)
        throw std::logic_error("union period formula disagrees with direct search: " +
                               to_string(f) + " vs " + to_string(d));
    return PeriodReport{f, "union-formula"};
}

}  // namespace bfree
