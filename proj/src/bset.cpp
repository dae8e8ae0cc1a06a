#include "bfree/bset.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace bfree {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_pairwise_coprime(const std::vector<Int>& vals, const std::string& what) {
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            require(coprime(vals[i], vals[j]), what + ": entries " + to_string(vals[i]) + " and " +
                                                   to_string(vals[j]) + " share a factor");
}

const std::vector<Int>& d_or_c(const BSetSpec& spec) { return spec.d.empty() ? spec.c : spec.d; }

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Explicit: return "explicit";
        case Family::B1: return "b1";
        case Family::B1Cut: return "b1_squares";
        case Family::B2: return "b2";
        case Family::ProductChain: return "product_chain";
        case Family::TwoFiltrations: return "two_filtrations";
    }
    return "?";
}

void validate_spec(const BSetSpec& spec) {
    require(spec.horizon >= 1, spec.name + ": horizon must be at least 1");
    const auto len_ok = [&](const std::vector<Int>& v, const char* which) {
        require((long)v.size() >= spec.horizon,
                spec.name + ": parameter list " + which + " shorter than the horizon");
    };
    switch (spec.family) {
        case Family::B1:
        case Family::B1Cut: {
            len_ok(spec.c, "c");
            for (const Int& v : spec.c)
                require(v > 1 && v % 2 == 1, spec.name + ": c entries must be odd and > 1, got " + to_string(v));
            check_pairwise_coprime(spec.c, spec.name + ": c");
            if (spec.family == Family::B1Cut)
                require(spec.cutoff == -1 || spec.cutoff >= 1, spec.name + ": cutoff must be -1 (none) or >= 1");
            break;
        }
        case Family::B2: {
            len_ok(spec.c, "c");
            if (!spec.d.empty()) len_ok(spec.d, "d");
            const auto& dd = d_or_c(spec);
            std::vector<Int> joint;
            for (long k = 0; k < spec.horizon; ++k) {
                require(spec.c[k] > 1 && coprime(spec.c[k], 6),
                        spec.name + ": c entries must be > 1 and coprime to 6, got " + to_string(spec.c[k]));
                require(dd[k] > 1 && coprime(dd[k], 6),
                        spec.name + ": d entries must be > 1 and coprime to 6, got " + to_string(dd[k]));
                joint.push_back(lcm(spec.c[k], dd[k]));
            }
            check_pairwise_coprime(joint, spec.name + ": lcm(c_k, d_k)");
            break;
        }
        case Family::ProductChain: {
            len_ok(spec.q, "q");
            len_ok(spec.c, "c");
            std::vector<Int> joint;
            for (long k = 0; k < spec.horizon; ++k) {
                require(spec.q[k] > 1, spec.name + ": q entries must be > 1");
                require(spec.c[k] > 1, spec.name + ": c entries must be > 1");
                joint.push_back(spec.q[k]);
                joint.push_back(spec.c[k]);
            }
            check_pairwise_coprime(joint, spec.name + ": q and c jointly");
            break;
        }
        case Family::TwoFiltrations: {
            len_ok(spec.q, "q");
            len_ok(spec.c, "c");
            len_ok(spec.d, "d");
            std::vector<Int> joint;
            for (long k = 0; k < spec.horizon; ++k) {
                for (const Int& v : {spec.q[k], spec.c[k], spec.d[k]}) {
                    require(v > 1 && v % 2 == 1, spec.name + ": parameters must be odd and > 1, got " + to_string(v));
                    joint.push_back(v);
                }
            }
            check_pairwise_coprime(joint, spec.name + ": q, c, d jointly");
            break;
        }
        case Family::Explicit: {
            require(!spec.explicit_b.empty(), spec.name + ": explicit generator list is empty");
            require(spec.horizon == (long)spec.explicit_b.size(),
                    spec.name + ": horizon must equal the explicit list length");
            for (const Int& v : spec.explicit_b)
                require(v >= 2, spec.name + ": generators must be >= 2, got " + to_string(v));
            break;
        }
    }
    auto prim = is_primitive(spec);
    require(prim.primitive, spec.name + ": realized generators are not primitive (" + to_string(prim.divisor) +
                                " divides " + to_string(prim.multiple) + ")");
}

std::vector<int> generator_slots(const BSetSpec& spec, long index) {
    switch (spec.family) {
        case Family::B1: return {0};
        case Family::B1Cut:
            if (spec.cutoff < 0 || index < spec.cutoff) return {0, 1};
            return {0};
        case Family::B2: return {0, 1};
        case Family::ProductChain: return {0};
        case Family::TwoFiltrations: return {0, 1, 2};
        case Family::Explicit:
            if (index <= (long)spec.explicit_b.size()) return {0};
            return {};
    }
    return {};
}

std::optional<Int> generator_value(const BSetSpec& spec, long index, int slot) {
    if (index < 1 || index > spec.horizon) return std::nullopt;
    const auto slots = generator_slots(spec, index);
    if (std::find(slots.begin(), slots.end(), slot) == slots.end()) return std::nullopt;
    const std::size_t k = static_cast<std::size_t>(index);
    switch (spec.family) {
        case Family::B1:
            return pow2(k) * spec.c[k - 1];
        case Family::B1Cut:
            if (slot == 0) return pow2(k) * spec.c[k - 1];
            return pow2(k - 1) * spec.c[k - 1] * spec.c[k - 1];
        case Family::B2:
            if (slot == 0) return pow2(k) * spec.c[k - 1];
            return int_pow(3, k) * d_or_c(spec)[k - 1];
        case Family::ProductChain: {
            if (index == 1) return spec.q[0] * spec.c[0];
            if (index == 2) return spec.q[1] * spec.c[1];
            Int prefix = 1;
            for (long i = 1; i <= index - 2; ++i) prefix *= spec.q[i - 1];
            return prefix * spec.q[k - 1] * spec.c[k - 1];
        }
        case Family::TwoFiltrations:
            if (slot == 0) return pow2(k) * spec.q[k - 1] * spec.c[k - 1];
            if (slot == 1) return pow2(k) * spec.q[k - 1] * spec.d[k - 1];
            return pow2(k + 1) * spec.q[k - 1];
        case Family::Explicit:
            return spec.explicit_b[k - 1];
    }
    return std::nullopt;
}

IntSet realized_generators(const BSetSpec& spec) {
    std::vector<Int> vals;
    for (long k = 1; k <= spec.horizon; ++k)
        for (int slot : generator_slots(spec, k)) vals.push_back(*generator_value(spec, k, slot));
    return make_set(std::move(vals));
}

std::optional<Int> min_unrealized_value(const BSetSpec& spec) {
    const unsigned long h = static_cast<unsigned long>(spec.horizon);
    switch (spec.family) {
        case Family::B1:
        case Family::B1Cut:
            // main term 2^k c_k >= 3*2^k; square term 2^(k-1) c_k^2 >= 9*2^(k-1)
            return Int(3) * pow2(h + 1);
        case Family::B2:
            // parameters are coprime to 6, hence >= 5
            return Int(5) * pow2(h + 1);
        case Family::ProductChain: {
            // For index m > horizon the two fresh factors q_m, c_m are
            // distinct coprime values > 1, so their product is at least 6;
            // the realized q-prefix up to index m-2 only grows with m.
            Int prefix = 1;
            for (long i = 1; i <= spec.horizon - 1; ++i) prefix *= spec.q[i - 1];
            return Int(6) * prefix;
        }
        case Family::TwoFiltrations:
            // smallest branch is 2^(i+1) q_i >= 3*2^(i+1)
            return Int(3) * pow2(h + 2);
        case Family::Explicit:
            return std::nullopt;
    }
    return std::nullopt;
}

bool no_unrealized_divisor(const BSetSpec& spec, const Int& m) {
    if (m == 0) return false;  // everything divides 0
    if (spec.family == Family::Explicit) return true;

    // Fresh-factor test.  Every unrealized generator contains a parameter
    // from beyond the lists, > 1 and coprime to all realized parameters (and,
    // where the family demands it, to 2 or 6).  Strip m of everything the
    // realized parameters and the family's fixed primes can supply; if
    // nothing is left, no fresh factor can divide m.
    Int known = spec.family == Family::ProductChain ? Int(1) : Int(2);
    if (spec.family == Family::B2) known = 6;
    for (const auto* list : {&spec.c, &spec.d, &spec.q}) {
        // Only the realized prefix: anything a longer list pins beyond the
        // horizon still belongs to an unrealized generator.
        const std::size_t take = std::min(list->size(), static_cast<std::size_t>(spec.horizon));
        for (std::size_t i = 0; i < take; ++i) known *= (*list)[i];
    }
    Int rest = m < 0 ? Int(-m) : m;
    for (Int g = gcd(rest, known); g > 1; g = gcd(rest, known))
        while (rest % g == 0) rest /= g;
    if (rest == 1) return true;

    // Index-power test: the structural factor 2^k, 3^k, or q_1..q_(k-2)
    // grows with the index, so m can cap the index below the horizon.
    const unsigned long h = static_cast<unsigned long>(spec.horizon);
    switch (spec.family) {
        case Family::B1:
            // unrealized 2^k c_k needs 2^k | m with k > h
            return two_adic_valuation(m) <= h;
        case Family::B1Cut: {
            const unsigned long v = two_adic_valuation(m);
            const bool main_ok = v <= h;
            // square term 2^(k-1) c_k^2 exists for k < cutoff (or everywhere)
            const bool squares_done = spec.cutoff >= 0 && spec.cutoff <= spec.horizon + 1;
            const bool square_ok = squares_done || v + 1 <= h;
            return main_ok && square_ok;
        }
        case Family::B2:
            return two_adic_valuation(m) <= h && adic_valuation(m, 3) <= h;
        case Family::ProductChain: {
            // b_k for k > h contains the realized prefix q_1..q_(h-1)
            if (spec.horizon < 2) return false;
            Int prefix = 1;
            for (long i = 1; i <= spec.horizon - 1; ++i) prefix *= spec.q[static_cast<std::size_t>(i - 1)];
            return m % prefix != 0;
        }
        case Family::TwoFiltrations:
            // every branch at index k carries at least 2^k
            return two_adic_valuation(m) <= h;
        case Family::Explicit:
            return true;
    }
    return false;
}

std::optional<Int> generator_gcd_with(const BSetSpec& spec, long index, int slot, const Int& m) {
    if (m < 1) throw std::invalid_argument("generator_gcd_with: modulus must be positive");
    if (index <= spec.horizon) {
        auto v = generator_value(spec, index, slot);
        if (!v) return std::nullopt;
        return gcd(*v, m);
    }
    const auto slots = generator_slots(spec, index);
    if (std::find(slots.begin(), slots.end(), slot) == slots.end()) return std::nullopt;

    // Beyond the horizon the parameter factors are fresh and the family
    // constraints force them coprime to anything built from powers of 2, 3
    // and realized parameters.  Guard that m really is of that shape.
    Int stripped = m;
    auto strip_all = [&](const Int& p) {
        if (p < 2) return;
        Int g = gcd(stripped, p);
        while (g > 1) {
            while (stripped % g == 0) stripped /= g;
            g = gcd(stripped, p);
        }
    };
    strip_all(2);
    strip_all(3);
    for (const auto* list : {&spec.c, &spec.d, &spec.q})
        for (const Int& p : *list) strip_all(p);
    if (stripped != 1)
        throw std::logic_error("generator_gcd_with: modulus has factors outside the realized parameters; "
                               "gcd with unrealized generators is not determined");

    const unsigned long k = static_cast<unsigned long>(index);
    switch (spec.family) {
        case Family::B1:
            return pow2(std::min(k, adic_valuation(m, 2)));
        case Family::B1Cut:
            if (slot == 0) return pow2(std::min(k, adic_valuation(m, 2)));
            return pow2(std::min(k - 1, adic_valuation(m, 2)));
        case Family::B2:
            if (slot == 0) return pow2(std::min(k, adic_valuation(m, 2)));
            return int_pow(3, std::min(k, adic_valuation(m, 3)));
        case Family::ProductChain: {
            Int prefix = 1;
            const long top = std::min<long>(index - 2, spec.horizon);
            for (long i = 1; i <= top; ++i) prefix *= spec.q[i - 1];
            return gcd(prefix, m);
        }
        case Family::TwoFiltrations:
            if (slot == 2) return pow2(std::min(k + 1, adic_valuation(m, 2)));
            return pow2(std::min(k, adic_valuation(m, 2)));
        case Family::Explicit:
            return std::nullopt;
    }
    return std::nullopt;
}

std::uint8_t BitWindow::at(const Int& pos) const {
    if (!in_range(pos)) throw std::out_of_range("BitWindow::at: position outside window");
    return bits[checked_size_t(pos - start, "BitWindow::at")];
}

namespace {

// Shared sieve: start from all-ones and clear positions s in [lo, hi] where
// (s + offset(b)) = 0 mod b for some realized generator b.
BitWindow sieve_window(const BSetSpec& spec, const Int& lo, const Int& hi,
                       const std::function<Int(const Int&)>& offset_of) {
    if (hi < lo) throw std::invalid_argument("window bounds reversed");
    const std::size_t len = checked_size_t(hi - lo + 1, "eta window length");
    if (len > 200'000'000) throw std::invalid_argument("window too large");
    BitWindow w;
    w.start = lo;
    w.bits.assign(len, 1);
    for (const Int& b : realized_generators(spec)) {
        // first s >= lo with s = -offset (mod b)
        Int first = lo + mod_floor(-(lo + offset_of(b)), b);
        for (Int s = first; s <= hi; s += b) w.bits[checked_size_t(s - lo, "eta sieve")] = 0;
    }
    return w;
}

}  // namespace

BitWindow eta_segment(const BSetSpec& spec, const Int& lo, const Int& hi) {
    const Int reach = std::max(abs(lo), abs(hi));
    if (auto bound = min_unrealized_value(spec); bound && *bound <= reach) {
        // Name the first position the horizon cannot certify.
        Int first_bad = (abs(lo) >= *bound) ? lo : *bound;
        throw std::invalid_argument(spec.name + ": horizon too small for eta on [" + to_string(lo) + ", " +
                                    to_string(hi) + "]; first unverifiable position is " + to_string(first_bad) +
                                    " (unrealized generators may reach " + to_string(*bound) + ")");
    }
    return sieve_window(spec, lo, hi, [](const Int&) { return Int(0); });
}

Int BResidues::at(const Int& b) const {
    for (const auto& [mod, res] : overrides)
        if (mod == b) return mod_floor(res, b);
    return mod_floor(base, b);
}

PhiCodeResult phi_code(const BSetSpec& spec, const BResidues& y, const Int& lo, const Int& hi) {
    Int slack = abs(y.base);
    for (const auto& [mod, res] : y.overrides) {
        (void)res;
        slack = std::max(slack, mod);
    }
    PhiCodeResult out;
    out.required_bound = std::max(abs(lo), abs(hi)) + slack;
    if (auto bound = min_unrealized_value(spec); bound && *bound <= out.required_bound) out.certified = false;
    out.window = sieve_window(spec, lo, hi, [&](const Int& b) { return y.at(b); });
    return out;
}

TautReport is_taut_truncation(const BSetSpec& spec, const DensityBudget& budget) {
    const IntSet all = realized_generators(spec);
    TautReport rep;
    auto base = density_of_multiples(all, budget);
    if (!base) {
        rep.detail = "density of the full truncation is out of budget";
        return rep;
    }
    for (const Int& b : all) {
        IntSet rest;
        for (const Int& v : all)
            if (v != b) rest.push_back(v);
        auto d = density_of_multiples(rest, budget);
        if (!d) {
            rep.witness = b;
            rep.detail = "density without " + to_string(b) + " is out of budget";
            return rep;
        }
        if (*d >= *base) {
            rep.verdict = TautReport::Verdict::not_taut;
            rep.witness = b;
            rep.detail = "removing " + to_string(b) + " does not lower the density";
            return rep;
        }
    }
    rep.verdict = TautReport::Verdict::taut;
    return rep;
}

PrimitivityReport is_primitive(const BSetSpec& spec) { return check_primitive(realized_generators(spec)); }

}  // namespace bfree
