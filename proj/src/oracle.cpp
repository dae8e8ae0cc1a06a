#include "bfree/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace bfree {

namespace {

IntSet natural_level_set(const BSetSpec& spec, long n) {
    if (n < 1) throw std::invalid_argument("oracle: level must be >= 1");
    std::vector<Int> vals;
    for (long i = 1; i <= n; ++i)
        for (int slot : generator_slots(spec, i)) {
            const auto v = generator_value(spec, i, slot);
            if (!v)
                throw std::runtime_error("oracle: level " + std::to_string(n) +
                                         " reaches past the realized horizon");
            vals.push_back(*v);
        }
    if (vals.empty()) throw std::invalid_argument("oracle: empty level set");
    return make_set(std::move(vals));
}

struct ScanData {
    IntSet S;                // saturated level set
    Int p = 1;               // lcm(S)
    std::vector<Int> gcds;   // distinct gcd(b, p) over realized b
};

ScanData prepare_scan(const BSetSpec& spec, const IntSet& level_set) {
    ScanData d;
    d.p = lcm_of(level_set);

    // Saturate: any realized generator dividing the modulus belongs to the
    // level for the purposes of the all-zero test.
    std::vector<Int> vals(level_set.begin(), level_set.end());
    const IntSet realized = realized_generators(spec);
    for (const Int& b : realized)
        if (d.p % b == 0) vals.push_back(b);
    d.S = make_set(std::move(vals));

    // A generator of value <= p that is not realized could contribute a gcd
    // the scan below never sees, so insist the horizon rules that out.
    if (const auto mu = min_unrealized_value(spec); mu && *mu <= d.p)
        throw std::runtime_error(
            "oracle: insufficient horizon: an unrealized generator could be as small as " +
            to_string(*mu) + " <= level modulus " + to_string(d.p));

    std::vector<Int> gs;
    for (const Int& b : realized) gs.push_back(gcd(b, d.p));
    std::sort(gs.begin(), gs.end());
    gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
    d.gcds = std::move(gs);
    return d;
}

// Mark multiples of `step` within [lo, lo + buf.size()).
void mark_multiples(std::vector<char>& buf, const Int& lo, const Int& step) {
    const std::size_t m = buf.size();
    Int first = mod_floor(-lo, step);
    if (first >= Int(m)) return;
    const std::size_t stp = checked_size_t(step, "oracle mark step");
    for (std::size_t i = checked_size_t(first, "oracle mark start"); i < m; i += stp)
        buf[i] = 1;
}

}  // namespace

ResidueSet naive_holes_in(const BSetSpec& spec, const IntSet& level_set, std::size_t sieve_cap) {
    const ScanData d = prepare_scan(spec, level_set);
    const std::size_t m = checked_size_t(d.p, "oracle sieve span");
    if (m > sieve_cap)
        throw std::runtime_error("oracle: level modulus " + to_string(d.p) +
                                 " exceeds the full-period sieve cap");
    std::vector<char> zero(m, 0), covered(m, 0);
    for (const Int& s : d.S) mark_multiples(zero, 0, s);
    for (const Int& g : d.gcds) mark_multiples(covered, 0, g);
    std::vector<Int> holes;
    for (std::size_t i = 0; i < m; ++i)
        if (!zero[i] && covered[i]) holes.push_back(Int(i));
    return residue_set_mod(d.p, std::move(holes));
}

BitWindow naive_holes_window_in(const BSetSpec& spec, const IntSet& level_set, const Int& lo,
                                const Int& hi) {
    if (hi < lo) throw std::invalid_argument("oracle: window end before start");
    const ScanData d = prepare_scan(spec, level_set);
    const std::size_t m = checked_size_t(hi - lo, "oracle window span");
    std::vector<char> zero(m, 0), covered(m, 0);
    for (const Int& s : d.S) mark_multiples(zero, lo, s);
    for (const Int& g : d.gcds) mark_multiples(covered, lo, g);
    BitWindow w;
    w.start = lo;
    w.bits.resize(m);
    for (std::size_t i = 0; i < m; ++i) w.bits[i] = (!zero[i] && covered[i]) ? 1 : 0;
    return w;
}

ResidueSet naive_holes(const BSetSpec& spec, long n, std::size_t sieve_cap) {
    return naive_holes_in(spec, natural_level_set(spec, n), sieve_cap);
}

BitWindow naive_holes_window(const BSetSpec& spec, long n, const Int& lo, const Int& hi) {
    return naive_holes_window_in(spec, natural_level_set(spec, n), lo, hi);
}

Int naive_min_period(const ResidueSet& s, std::size_t cap) {
    if (s.residues.empty()) return 1;
    const std::size_t m = checked_size_t(s.modulus, "oracle period bitmap");
    if (m > cap)
        throw std::runtime_error("naive_min_period: modulus exceeds the bitmap cap");
    std::vector<char> bit(m, 0);
    for (const Int& r : rs_full_residues(s, cap))
        bit[checked_size_t(r, "oracle period residue")] = 1;
    for (std::size_t t = 1; t < m; ++t) {
        if (m % t != 0) continue;
        bool ok = true;
        for (std::size_t i = 0; i < m; ++i)
            if (bit[i] != bit[(i + t) % m]) {
                ok = false;
                break;
            }
        if (ok) return Int(t);
    }
    return s.modulus;
}

long naive_rho(const BitWindow& bits, long n) {
    if (n < 1) throw std::invalid_argument("naive_rho: block length must be positive");
    const long len = static_cast<long>(bits.bits.size());
    if (n > len) return 0;
    std::set<std::string> seen;
    for (long i = 0; i + n <= len; ++i)
        seen.insert(std::string(bits.bits.begin() + i, bits.bits.begin() + i + n));
    return static_cast<long>(seen.size());
}

}  // namespace bfree
