#include "bfree/filtration.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bfree {

namespace {

// Count, per gcd value, the generators outside S among indices 1..probe.
// Returns false (and leaves gaps) when some gcd could not be determined.
bool tally_gcds(const BSetSpec& spec, const LevelData& lvl, long probe, std::map<Int, long>& sources,
                std::vector<Int>& values) {
    bool complete = true;
    for (long idx = 1; idx <= probe; ++idx) {
        for (int slot : generator_slots(spec, idx)) {
            auto g = generator_gcd_with(spec, idx, slot, lvl.ell);
            if (!g) {
                complete = false;
                continue;
            }
            values.push_back(*g);
            bool in_S = false;
            if (auto v = generator_value(spec, idx, slot)) in_S = set_contains(lvl.S, *v);
            if (!in_S) sources[*g] += 1;
        }
    }
    return complete;
}

// Closed-form set of infinite-source values for the bundled families; the
// probe-based classification must reproduce it exactly.
std::optional<IntSet> closed_form_infinite(const BSetSpec& spec, const LevelData& lvl,
                                           const FiltrationOptions& opt) {
    const unsigned long n = static_cast<unsigned long>(lvl.n);
    switch (spec.family) {
        case Family::B1:
        case Family::B1Cut:
            return IntSet{pow2(n)};
        case Family::B2:
            return IntSet{pow2(n), int_pow(3, n)};
        case Family::ProductChain: {
            Int prod = 1;
            for (unsigned long i = 0; i < n; ++i) prod *= spec.q[i];
            return IntSet{prod};
        }
        case Family::TwoFiltrations:
            (void)opt;
            return IntSet{pow2(n + 1)};
        case Family::Explicit:
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

std::string source_class_name(SourceClass c) {
    switch (c) {
        case SourceClass::member_of_s: return "member-of-S";
        case SourceClass::finite_source: return "finite-source";
        case SourceClass::infinite_source: return "infinite-source";
    }
    return "?";
}

void classify_sources(LevelData& lvl, const BSetSpec& spec, const FiltrationOptions& opt) {
    if (opt.stab_threshold < 1) throw std::invalid_argument("classify_sources: threshold must be >= 1");
    long probe = opt.probe_horizon;
    if (probe == 0) probe = std::max(spec.horizon, lvl.n + opt.stab_threshold + 4);
    if (probe < spec.horizon) throw std::invalid_argument("classify_sources: probe horizon below spec horizon");
    if (spec.family == Family::Explicit) probe = spec.horizon;

    std::map<Int, long> sources, sources2;
    std::vector<Int> values, values2;
    const bool complete = tally_gcds(spec, lvl, probe, sources, values);
    const bool complete2 = tally_gcds(spec, lvl, 2 * probe, sources2, values2);

    // Explicit truncations carry no information about the unrealized tail,
    // so their classification can only ever be a heuristic reading.
    lvl.heuristic = spec.family == Family::Explicit || !(complete && complete2);
    lvl.A.clear();
    for (const Int& a : make_set(values)) {
        AEntry e;
        e.value = a;
        auto it = sources.find(a);
        e.source_count = it == sources.end() ? 0 : it->second;
        const long c2 = sources2.count(a) ? sources2.at(a) : 0;
        if (set_contains(lvl.S, a))
            e.cls = SourceClass::member_of_s;
        else if (e.source_count >= opt.stab_threshold && c2 >= opt.stab_threshold)
            e.cls = SourceClass::infinite_source;
        else
            e.cls = SourceClass::finite_source;
        lvl.A.push_back(e);
    }

    if (auto expect = closed_form_infinite(spec, lvl, opt)) {
        if (infinite_source_values(lvl) != *expect)
            throw std::logic_error(spec.name + ": source classification at level " + std::to_string(lvl.n) +
                                   " disagrees with the family's closed form");
    }
}

bool saturate(LevelData& lvl, const BSetSpec& spec, const FiltrationOptions& opt) {
    const IntSet realized = realized_generators(spec);
    std::vector<Int> grown(lvl.S.begin(), lvl.S.end());
    bool changed = false;
    // Any divisor of the level modulus that is itself a generator belongs to
    // the saturation.  Unrealized generators never divide the modulus: their
    // fresh parameter factor is coprime to it, which generator_gcd_with
    // would flag, so scanning realized values is exact.
    for (const Int& b : realized) {
        if (divides(b, lvl.ell) && !set_contains(lvl.S, b)) {
            grown.push_back(b);
            changed = true;
        }
    }
    if (changed) {
        lvl.S = make_set(grown);
        if (lvl.ell != lcm_of(lvl.S)) throw std::logic_error("saturate: level modulus changed");
        classify_sources(lvl, spec, opt);
    }
    lvl.saturated = true;
    return changed;
}

std::vector<LevelData> default_filtration(const BSetSpec& spec, long n_max, const FiltrationOptions& opt) {
    if (n_max < 1) throw std::invalid_argument("default_filtration: need at least one level");
    if (opt.kind == FiltrationKind::extended && spec.family != Family::TwoFiltrations)
        throw std::invalid_argument("default_filtration: extended filtration only applies to two_filtrations");
    const long need = opt.kind == FiltrationKind::extended ? n_max + 1 : n_max;
    if (need > spec.horizon)
        throw std::invalid_argument(spec.name + ": horizon " + std::to_string(spec.horizon) +
                                    " cannot realize " + std::to_string(n_max) + " filtration levels");

    std::vector<LevelData> levels;
    for (long n = 1; n <= n_max; ++n) {
        LevelData lvl;
        lvl.n = n;
        std::vector<Int> gens;
        for (long idx = 1; idx <= n; ++idx)
            for (int slot : generator_slots(spec, idx)) gens.push_back(*generator_value(spec, idx, slot));
        if (opt.kind == FiltrationKind::extended) gens.push_back(*generator_value(spec, n + 1, 0));
        lvl.S = make_set(gens);
        lvl.ell = lcm_of(lvl.S);
        classify_sources(lvl, spec, opt);
        saturate(lvl, spec, opt);
        levels.push_back(std::move(lvl));
    }
    return levels;
}

IntSet infinite_source_values(const LevelData& lvl) {
    std::vector<Int> out;
    for (const AEntry& e : lvl.A)
        if (e.cls == SourceClass::infinite_source) out.push_back(e.value);
    return make_set(out);
}

IntSet infinite_source_core(const LevelData& lvl) { return primitivize(infinite_source_values(lvl)); }

}  // namespace bfree
