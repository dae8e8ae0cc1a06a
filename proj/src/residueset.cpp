#include "bfree/residueset.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace bfree {

ResidueSet make_residue_set(Int modulus, Int period, std::vector<Int> residues) {
    if (modulus < 1 || period < 1) throw std::invalid_argument("residue set: modulus and period must be positive");
    if (modulus % period != 0) throw std::invalid_argument("residue set: period must divide modulus");
    for (Int& r : residues) r = mod_floor(r, period);
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    return ResidueSet{std::move(modulus), std::move(period), std::move(residues)};
}

ResidueSet residue_set_mod(Int modulus, std::vector<Int> residues) {
    Int p = modulus;
    return make_residue_set(std::move(modulus), std::move(p), std::move(residues));
}

bool rs_contains(const ResidueSet& s, const Int& x) {
    return std::binary_search(s.residues.begin(), s.residues.end(), mod_floor(x, s.period));
}

ResidueSet rs_refine(const ResidueSet& s, const Int& t) {
    if (t % s.period != 0 || s.modulus % t != 0)
        throw std::invalid_argument("rs_refine: target period must sit between stored period and modulus");
    const Int copies = t / s.period;
    std::vector<Int> out;
    out.reserve(s.residues.size() * checked_size_t(copies, "rs_refine"));
    for (Int c = 0; c < copies; ++c) {
        const Int base = c * s.period;
        for (const Int& r : s.residues) out.push_back(base + r);
    }
    std::sort(out.begin(), out.end());
    return ResidueSet{s.modulus, t, std::move(out)};
}

std::vector<Int> rs_full_residues(const ResidueSet& s, std::size_t cap) {
    const Int total = s.count();
    if (total > Int(cap)) throw std::overflow_error("rs_full_residues: expansion exceeds cap");
    return rs_refine(s, s.modulus).residues;
}

ResidueSet rs_shift(const ResidueSet& s, const Int& k) {
    std::vector<Int> out;
    out.reserve(s.residues.size());
    for (const Int& r : s.residues) out.push_back(mod_floor(r + k, s.period));
    std::sort(out.begin(), out.end());
    return ResidueSet{s.modulus, s.period, std::move(out)};
}

namespace {

std::pair<ResidueSet, ResidueSet> on_common_period(const ResidueSet& a, const ResidueSet& b) {
    if (a.modulus != b.modulus)
        throw std::invalid_argument("residue set binary op: moduli differ");
    const Int t = lcm(a.period, b.period);
    return {rs_refine(a, t), rs_refine(b, t)};
}

}  // namespace

ResidueSet rs_intersect(const ResidueSet& a, const ResidueSet& b) {
    auto [x, y] = on_common_period(a, b);
    std::vector<Int> out;
    std::set_intersection(x.residues.begin(), x.residues.end(), y.residues.begin(), y.residues.end(),
                          std::back_inserter(out));
    return ResidueSet{x.modulus, x.period, std::move(out)};
}

ResidueSet rs_union(const ResidueSet& a, const ResidueSet& b) {
    auto [x, y] = on_common_period(a, b);
    std::vector<Int> out;
    std::set_union(x.residues.begin(), x.residues.end(), y.residues.begin(), y.residues.end(),
                   std::back_inserter(out));
    return ResidueSet{x.modulus, x.period, std::move(out)};
}

ResidueSet rs_difference(const ResidueSet& a, const ResidueSet& b) {
    auto [x, y] = on_common_period(a, b);
    std::vector<Int> out;
    std::set_difference(x.residues.begin(), x.residues.end(), y.residues.begin(), y.residues.end(),
                        std::back_inserter(out));
    return ResidueSet{x.modulus, x.period, std::move(out)};
}

bool rs_equal(const ResidueSet& a, const ResidueSet& b) {
    if (a.modulus != b.modulus) return false;
    auto [x, y] = on_common_period(a, b);
    return x.residues == y.residues;
}

bool rs_subset(const ResidueSet& a, const ResidueSet& b) {
    auto [x, y] = on_common_period(a, b);
    return std::includes(y.residues.begin(), y.residues.end(), x.residues.begin(), x.residues.end());
}

bool rs_meets_progression(const ResidueSet& s, const Int& r, const Int& m) {
    if (m < 1) throw std::invalid_argument("rs_meets_progression: modulus must be positive");
    // x = h (mod period) and x = r (mod m) are simultaneously solvable exactly
    // when h = r modulo gcd(period, m).
    const Int g = gcd(s.period, m);
    const Int target = mod_floor(r, g);
    for (const Int& h : s.residues)
        if (h % g == target) return true;
    return false;
}

Int rs_minimal_period(const ResidueSet& s) {
    if (s.residues.empty()) return 1;
    // Shift invariances of a periodic set form a group, so the minimal period
    // divides every other period, in particular the stored one.
    for (const Int& d : sorted_divisors(s.period)) {
        if (d == s.period) return d;
        bool ok = true;
        for (const Int& r : s.residues) {
            if (!std::binary_search(s.residues.begin(), s.residues.end(), mod_floor(r + d, s.period))) {
                ok = false;
                break;
            }
        }
        if (ok) return d;
    }
    return s.period;
}

ResidueSet rs_compress(const ResidueSet& s) {
    const Int t = rs_minimal_period(s);
    if (t == s.period) return s;
    std::vector<Int> reduced;
    for (const Int& r : s.residues)
        if (r < t) reduced.push_back(r);
    return make_residue_set(s.modulus, t, std::move(reduced));
}

}  // namespace bfree
