#include "bfree/toeplitz.hpp"

#include "bfree/ints.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace bfree {

namespace {

Int pow4(long n) { return Int(1) << (2 * n); }

// r_n = (4^n - 1) / 3 = 1 + 4 + ... + 4^{n-1}
Int gh_r(long n) { return (pow4(n) - 1) / 3; }

Int gh_period(long n) { return Int(1) << (2 * n + 1); }

const SkeletonLevel& skeleton_level(const DirectToeplitzSpec& spec, long n) {
    if (n < 1) throw std::invalid_argument("toeplitz levels start at 1");
    if (n > static_cast<long>(spec.levels.size()))
        throw std::invalid_argument("skeleton declares no level " + std::to_string(n));
    return spec.levels[static_cast<std::size_t>(n - 1)];
}

void validate_skeleton_or_throw(const DirectToeplitzSpec& spec) {
    if (spec.levels.empty()) throw std::invalid_argument("skeleton needs at least one level");
    Int prev_p = 1;
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        const SkeletonLevel& lv = spec.levels[i];
        const std::string where = "skeleton level " + std::to_string(i + 1);
        if (lv.p < 1) throw std::invalid_argument(where + ": period must be positive");
        if (lv.p % prev_p != 0)
            throw std::invalid_argument(where + ": period not a multiple of the previous one");
        const std::size_t p = checked_size_t(lv.p, "skeleton period");
        if (lv.fill.size() != p)
            throw std::invalid_argument(where + ": fill word length differs from the period");
        Int prev_r = -1;
        for (const Int& r : lv.holes) {
            if (r < 0 || r >= lv.p) throw std::invalid_argument(where + ": hole outside [0, p)");
            if (r <= prev_r) throw std::invalid_argument(where + ": holes not sorted distinct");
            prev_r = r;
        }
        std::size_t hole_idx = 0;
        for (std::size_t s = 0; s < p; ++s) {
            const char c = lv.fill[s];
            if (c != '0' && c != '1' && c != '-')
                throw std::invalid_argument(where + ": fill may only contain 0, 1, -");
            const bool declared_hole =
                hole_idx < lv.holes.size() && lv.holes[hole_idx] == Int(s);
            if (declared_hole) ++hole_idx;
            if (c == '-' && !declared_hole)
                throw std::invalid_argument(where + ": '-' at position " + std::to_string(s) +
                                            " without a declared hole");
            if (c != '-' && declared_hole)
                throw std::invalid_argument(where + ": declared hole at position " +
                                            std::to_string(s) + " not marked '-'");
        }
        // Bits survive refinement: whatever the coarser level assigned must
        // reappear verbatim, so no position is ever re-filled.
        if (i > 0) {
            const SkeletonLevel& up = spec.levels[i - 1];
            const std::size_t q = checked_size_t(up.p, "skeleton period");
            for (std::size_t s = 0; s < p; ++s) {
                const char parent = up.fill[s % q];
                if (parent != '-' && lv.fill[s] != parent)
                    throw std::invalid_argument(where + ": position " + std::to_string(s) +
                                                " reassigned against the coarser level");
            }
        }
        prev_p = lv.p;
    }
}

// Child classes sit inside parent classes exactly when the stored period of
// the child is a multiple of the parent's and every stored child residue
// already lies in the parent set.
bool nested_in(const ResidueSet& child, const ResidueSet& parent) {
    if (child.period % parent.period != 0) return false;
    for (const Int& r : child.residues)
        if (!rs_contains(parent, r)) return false;
    return true;
}

struct GhResolution {
    bool resolved = false;
    std::uint8_t bit = 0;
};

// Walk the levels: at level n the surviving holes are 4^n*Z - r_n, and a
// level-(n-1) hole 4^{n-1}*(4t - k) - r_{n-1} is filled with t mod 2 for
// k in {0,2,3} while k = 1 survives.
GhResolution gh_resolve(const Int& x, long level_budget) {
    Int r_prev = 0;
    Int scale = 1;
    for (long n = 1; n <= level_budget; ++n) {
        const Int m = (x + r_prev) / scale;  // exact: x lies in the level-(n-1) holes
        const Int mf = mod_floor(m, 4);
        if (mf == 3) {
            r_prev += scale;
            scale <<= 2;
            continue;
        }
        Int t;
        if (mf == 0)
            t = m / 4;
        else if (mf == 1)
            t = (m + 3) / 4;
        else
            t = (m + 2) / 4;
        return {true, static_cast<std::uint8_t>(mod_floor(t, 2) == 1 ? 1 : 0)};
    }
    return {false, 0};
}

}  // namespace

ToeplitzValidation validate_direct_spec(const DirectToeplitzSpec& spec) {
    ToeplitzValidation v;
    if (spec.kind == ToeplitzKind::gh_variant) {
        for (long n = 1; n + 1 <= 3; ++n)
            if (!nested_in(direct_holes(spec, n + 1), direct_holes(spec, n)))
                throw std::logic_error("gh_variant hole sets failed to nest");
        v.nesting_checked_up_to = 3;
        v.user_asserted_beyond = false;
        v.notes.push_back("levels follow the closed form p_n = 2^(2n+1), holes 4^n*Z - r_n");
        return v;
    }
    validate_skeleton_or_throw(spec);
    const long count = static_cast<long>(spec.levels.size());
    const long checked = std::min<long>(3, count);
    for (long n = 1; n + 1 <= checked; ++n)
        if (!nested_in(direct_holes(spec, n + 1), direct_holes(spec, n)))
            throw std::invalid_argument("skeleton level " + std::to_string(n + 1) +
                                        ": holes do not nest inside level " + std::to_string(n));
    v.nesting_checked_up_to = checked;
    v.user_asserted_beyond = count > 3;
    if (v.user_asserted_beyond)
        v.notes.push_back("hole nesting beyond level 3 is user-asserted");
    return v;
}

long direct_level_count(const DirectToeplitzSpec& spec) {
    if (spec.kind == ToeplitzKind::gh_variant) return -1;
    return static_cast<long>(spec.levels.size());
}

Int direct_period(const DirectToeplitzSpec& spec, long n) {
    if (n < 1) throw std::invalid_argument("toeplitz levels start at 1");
    if (spec.kind == ToeplitzKind::gh_variant) return gh_period(n);
    return skeleton_level(spec, n).p;
}

ResidueSet direct_holes(const DirectToeplitzSpec& spec, long n) {
    if (n < 1) throw std::invalid_argument("toeplitz levels start at 1");
    if (spec.kind == ToeplitzKind::gh_variant)
        return make_residue_set(gh_period(n), pow4(n), {mod_floor(-gh_r(n), pow4(n))});
    validate_skeleton_or_throw(spec);
    const SkeletonLevel& lv = skeleton_level(spec, n);
    return residue_set_mod(lv.p, lv.holes);
}

DirectSegment direct_eta_segment(const DirectToeplitzSpec& spec, const Int& lo, const Int& hi,
                                 long level_budget) {
    if (level_budget < 1)
        throw std::invalid_argument("direct_eta_segment: level budget must be at least 1");
    if (hi < lo) throw std::invalid_argument("direct_eta_segment: window ends before it starts");

    long budget = level_budget;
    if (spec.kind == ToeplitzKind::skeleton) {
        validate_skeleton_or_throw(spec);
        budget = std::min<long>(budget, static_cast<long>(spec.levels.size()));
    }

    DirectSegment seg;
    seg.window.start = lo;
    seg.window.bits.reserve(checked_size_t(hi - lo, "direct_eta_segment width"));
    for (Int x = lo; x < hi; ++x) {
        if (spec.kind == ToeplitzKind::gh_variant) {
            const GhResolution r = gh_resolve(x, budget);
            seg.window.bits.push_back(r.bit);
            if (!r.resolved) seg.unresolved.push_back(x);
            continue;
        }
        bool resolved = false;
        for (long k = 1; k <= budget && !resolved; ++k) {
            const SkeletonLevel& lv = spec.levels[static_cast<std::size_t>(k - 1)];
            const char c = lv.fill[checked_size_t(mod_floor(x, lv.p), "skeleton index")];
            if (c != '-') {
                seg.window.bits.push_back(c == '1' ? 1 : 0);
                resolved = true;
            }
        }
        if (!resolved) {
            seg.window.bits.push_back(0);
            seg.unresolved.push_back(x);
        }
    }
    return seg;
}

EssentialIterativeResult direct_essential_holes(const DirectToeplitzSpec& spec, long N, long n_max,
                                                long stab_window) {
    if (N < 1 || n_max < N)
        throw std::invalid_argument("direct_essential_holes: need 1 <= N <= n_max");
    if (spec.kind == ToeplitzKind::skeleton && n_max > static_cast<long>(spec.levels.size()))
        throw std::invalid_argument("direct_essential_holes: n_max beyond the declared levels");

    const Int pN = direct_period(spec, N);
    EssentialIterativeResult res;
    ResidueSet current = direct_holes(spec, N);
    res.survivor_counts.push_back(current.count());

    long last_change = N;
    for (long n = N + 1; n <= n_max; ++n) {
        const ResidueSet deeper = direct_holes(spec, n);
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

}  // namespace bfree
