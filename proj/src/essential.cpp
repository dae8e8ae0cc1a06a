#include "bfree/essential.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace bfree {

namespace {

const LevelData& level_at(const std::vector<LevelData>& levels, long n) {
    for (const LevelData& lvl : levels)
        if (lvl.n == n) return lvl;
    throw std::invalid_argument("no data for level " + std::to_string(n));
}

bool is_non_member(const LevelData& lvl, const Int& a, bool* found = nullptr) {
    for (const AEntry& e : lvl.A)
        if (e.value == a) {
            if (found) *found = true;
            return e.cls != SourceClass::member_of_s;
        }
    if (found) *found = false;
    return false;
}

void extend(const std::vector<LevelData>& levels, long N, long depth, std::vector<Int>& chain,
            std::vector<AASequence>& out) {
    const long i = static_cast<long>(chain.size()) - 1;
    if (i == depth) {
        out.push_back(AASequence{N, chain});
        return;
    }
    const LevelData& here = level_at(levels, N + i);
    const LevelData& next = level_at(levels, N + i + 1);
    for (const AEntry& e : next.A) {
        if (e.cls == SourceClass::member_of_s) continue;
        if (gcd(e.value, here.ell) != chain.back()) continue;
        chain.push_back(e.value);
        extend(levels, N, depth, chain, out);
        chain.pop_back();
    }
}

}  // namespace

std::vector<AASequence> enumerate_aA_sequences(const std::vector<LevelData>& levels, long N,
                                               const Int& a, long depth) {
    if (depth < 0) throw std::invalid_argument("enumerate_aA_sequences: negative depth");
    bool found = false;
    if (!is_non_member(level_at(levels, N), a, &found))
        throw std::invalid_argument("enumerate_aA_sequences: " + to_string(a) +
                                    (found ? " belongs to S at level " : " is not a gcd value of level ") +
                                    std::to_string(N));
    std::vector<AASequence> out;
    std::vector<Int> chain{a};
    extend(levels, N, depth, chain, out);
    return out;
}

SequenceSets S_of_sequence(const AASequence& seq, const BSetSpec& spec,
                           const std::vector<LevelData>& levels) {
    if (seq.values.empty()) throw std::invalid_argument("S_of_sequence: empty chain");
    const Int ellN = level_at(levels, seq.start_level).ell;

    std::vector<Int> joins;
    Int bound = 0;
    for (const Int& a : seq.values) {
        joins.push_back(lcm(a, ellN));
        bound = std::max(bound, joins.back());
    }
    // Any generator dividing one of the joins is at most the join itself, so
    // the scan below is exhaustive once no unrealized generator can divide a
    // join -- either because unrealized values already exceed it, or because
    // the family shape rules the division out.
    const auto mu = min_unrealized_value(spec);
    for (const Int& j : joins)
        if (mu && *mu <= j && !no_unrealized_divisor(spec, j))
            throw std::runtime_error("S_of_sequence: insufficient horizon: generators dividing " +
                                     to_string(j) + " may be unrealized (they start at " +
                                     to_string(*mu) + ")");

    std::vector<Int> got;
    for (const Int& b : realized_generators(spec)) {
        if (b > bound) break;
        for (const Int& j : joins)
            if (j % b == 0) {
                got.push_back(gcd(b, ellN));
                break;
            }
    }
    SequenceSets res;
    res.set = make_set(std::move(got));
    res.truncated = true;
    res.scan_bound = bound;
    return res;
}

SOfAResult S_of_a(const BSetSpec& spec, const std::vector<LevelData>& levels, long N, const Int& a,
                  long depth, long combination_cap) {
    SOfAResult res;
    const auto seqs = enumerate_aA_sequences(levels, N, a, depth);
    res.sequence_count = static_cast<long>(seqs.size());

    std::vector<IntSet> parts;
    for (const AASequence& seq : seqs) {
        IntSet s = S_of_sequence(seq, spec, levels).set;
        if (std::find(parts.begin(), parts.end(), s) == parts.end()) parts.push_back(std::move(s));
    }

    Int combos = 1;
    for (const IntSet& p : parts) combos *= Int(p.size());
    if (combos > combination_cap) {
        res.computed = false;
        return res;
    }

    // One element from each distinct part, lcm'd: odometer enumeration.
    std::vector<std::size_t> pick(parts.size(), 0);
    std::vector<Int> joined;
    while (true) {
        Int v = 1;
        for (std::size_t i = 0; i < parts.size(); ++i) v = lcm(v, parts[i][pick[i]]);
        joined.push_back(v);
        std::size_t i = 0;
        while (i < parts.size() && ++pick[i] == parts[i].size()) pick[i++] = 0;
        if (i == parts.size()) break;
    }
    res.set = primitivize(make_set(std::move(joined)));
    return res;
}

EssentialArithmeticResult essential_holes_arithmetic(const BSetSpec& spec,
                                                     const std::vector<LevelData>& levels, long N,
                                                     long depth) {
    const LevelData& base = level_at(levels, N);
    const Int pN = base.ell;

    auto assemble = [&](long d, std::vector<EssentialComponent>* keep) -> ResidueSet {
        ResidueSet acc = make_residue_set(pN, 1, {});
        for (const Int& a : infinite_source_values(base)) {
            const SOfAResult sa = S_of_a(spec, levels, N, a, d);
            if (!sa.computed)
                throw std::runtime_error("essential_holes_arithmetic: combination cap hit at a = " +
                                         to_string(a));
            ResidueSet arm = multiples_avoiding(a, sa.set, pN);
            if (arm.empty())
                throw std::runtime_error(
                    "essential_holes_arithmetic: empty component at a = " + to_string(a) +
                    ": source classification or chain depth is wrong");
            acc = rs_union(acc, arm);
            if (keep) keep->push_back(EssentialComponent{a, sa.set, sa.sequence_count});
        }
        return rs_compress(acc);
    };

    EssentialArithmeticResult res;
    res.set = assemble(depth, &res.components);

    const long deepest = N + depth + 1;
    bool have_deeper = false;
    for (const LevelData& lvl : levels) have_deeper = have_deeper || lvl.n == deepest;
    if (have_deeper) res.depth_stable = rs_equal(assemble(depth + 1, nullptr), res.set);
    return res;
}

ShortcutReport gh_shortcut_check(const BSetSpec& spec, const std::vector<LevelData>& levels,
                                 long N, long n_max) {
    const LevelData& base = level_at(levels, N);
    const IntSet realized = realized_generators(spec);
    const auto mu = min_unrealized_value(spec);

    ShortcutReport rep;
    for (long n = N + 1; n <= n_max; ++n) {
        for (const Int& a : infinite_source_values(level_at(levels, n))) {
            const Int join = lcm(base.ell, a);
            if (mu && *mu <= join && !no_unrealized_divisor(spec, join)) rep.scan_complete = false;
            for (const Int& b : realized) {
                if (b > join) break;
                if (join % b != 0 || set_contains(base.S, b)) continue;
                rep.holds = false;
                rep.n = n;
                rep.a = a;
                rep.b = b;
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace bfree
