#include "bfree/arith.hpp"

#include <stdexcept>

namespace bfree {

namespace {

// Extended Euclid: returns (g, u) with u*a = g (mod m), g = gcd(a, m).
std::pair<Int, Int> half_ext_gcd(Int a, Int m) {
    Int old_r = a, r = m;
    Int old_u = 1, u = 0;
    while (r != 0) {
        Int q = old_r / r;
        Int t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_u - q * u;
        old_u = u;
        u = t;
    }
    return {old_r, old_u};
}

}  // namespace

std::optional<ProgressionMeet> progression_intersect(const Int& r, const Int& l, const Int& s, const Int& m) {
    if (l < 1 || m < 1) throw std::invalid_argument("progression_intersect: moduli must be positive");
    const Int g0 = gcd(l, m);
    const Int diff = s - r;
    if (diff % g0 != 0) return std::nullopt;
    // Solve r + l*t = s (mod m):  (l/g0) t = diff/g0  (mod m/g0).
    const Int mg = m / g0;
    Int t = 0;
    if (mg > 1) {
        auto [g1, inv] = half_ext_gcd(mod_floor(l / g0, mg), mg);
        if (g1 != 1) throw std::logic_error("progression_intersect: reduced modulus not coprime");
        t = mod_floor(inv * mod_floor(diff / g0, mg), mg);
    }
    const Int L = lcm(l, m);
    const Int x = mod_floor(r + l * t, L);
    const Int g = gcd(x, L);
    // Any point of the intersection has the same gcd with L, and it factors
    // through the two legs; this identity is load-bearing for callers.
    const Int expected = lcm(gcd(mod_floor(r, l), l), gcd(mod_floor(s, m), m));
    if (g != expected) throw std::logic_error("progression_intersect: gcd identity violated");
    return ProgressionMeet{x, L, g};
}

std::optional<std::pair<Int, Int>> crt(const std::vector<std::pair<Int, Int>>& congruences) {
    Int x = 0, L = 1;
    for (const auto& [res, mod] : congruences) {
        if (mod < 1) throw std::invalid_argument("crt: moduli must be positive");
        auto meet = progression_intersect(x, L, mod_floor(res, mod), mod);
        if (!meet) return std::nullopt;
        x = meet->x;
        L = meet->L;
    }
    return std::make_pair(x, L);
}

Int count_multiples_in(const IntSet& a, const Int& m) {
    if (m < 1) throw std::invalid_argument("count_multiples_in: range must be positive");
    for (const Int& v : a)
        if (m % v != 0)
            throw std::invalid_argument("count_multiples_in: m must be a common period (multiple of every element)");
    const std::size_t n = checked_size_t(m, "count_multiples_in");
    std::vector<bool> hit(n, false);
    for (const Int& v : a) {
        const std::size_t step = checked_size_t(v, "count_multiples_in");
        for (std::size_t k = 0; k < n; k += step) hit[k] = true;
    }
    Int c = 0;
    for (bool b : hit) c += b ? 1 : 0;
    return c;
}

std::optional<Rat> density_of_multiples(const IntSet& a, const DensityBudget& budget) {
    if (a.empty()) return Rat(0);
    // The set of multiples only depends on the divisibility-minimal core.
    const IntSet p = primitivize(a);
    if (p.size() <= budget.subset_cap) {
        Rat dens = 0;
        // Depth-first inclusion-exclusion over nonempty subsets of p.
        std::vector<std::pair<std::size_t, std::pair<Int, int>>> stack;
        for (std::size_t i = 0; i < p.size(); ++i) stack.push_back({i, {Int(1), +1}});
        while (!stack.empty()) {
            auto [i, state] = stack.back();
            stack.pop_back();
            auto [base_lcm, sign] = state;
            const Int L = lcm(base_lcm, p[i]);
            dens += Rat(sign) / Rat(L);
            for (std::size_t j = i + 1; j < p.size(); ++j) stack.push_back({j, {L, -sign}});
        }
        return dens;
    }
    const Int L = lcm_of(p);
    if (L <= budget.sieve_bound) return Rat(count_multiples_in(p, L)) / Rat(L);
    return std::nullopt;
}

}  // namespace bfree
