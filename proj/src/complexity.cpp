#include "bfree/complexity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace bfree {

namespace {

// Distinct length-n blocks starting at the first `starts` offsets of w.
long count_distinct_blocks(const BitWindow& w, long n, long starts) {
    const auto nn = static_cast<std::size_t>(n);
    if (w.bits.size() < nn + static_cast<std::size_t>(starts) - 1)
        throw std::logic_error("count_distinct_blocks: window shorter than the requested scan");
    std::unordered_set<std::string> seen;
    std::string packed((nn + 7) / 8, '\0');
    for (long k = 0; k < starts; ++k) {
        packed.assign(packed.size(), '\0');
        for (std::size_t i = 0; i < nn; ++i)
            packed[i / 8] = static_cast<char>(packed[i / 8] | (w.bits[static_cast<std::size_t>(k) + i] << (i % 8)));
        seen.insert(packed);
    }
    return static_cast<long>(seen.size());
}

void require_counting_family(const BSetSpec& spec, const char* who) {
    if (spec.family != Family::B1 && spec.family != Family::B2)
        throw std::invalid_argument(std::string(who) +
                                    ": the block-counting argument covers only the plain doubling "
                                    "and doubling/tripling families (got " +
                                    family_name(spec.family) + ")");
}

Rat tail_or_default(const BSetSpec& spec, const std::optional<Rat>& tail) {
    if (tail) {
        if (*tail < 0) throw std::invalid_argument("tail bound must be nonnegative");
        return *tail;
    }
    // Sum of a halving series: valid whenever each unrealized parameter is at
    // least double its predecessor, which every bundled family satisfies.
    return Rat(1, spec.c.at(static_cast<std::size_t>(spec.horizon) - 1));
}

const Int& c_at(const BSetSpec& spec, long j) { return spec.c.at(static_cast<std::size_t>(j) - 1); }

Int d_at(const BSetSpec& spec, long j) {
    const auto& list = spec.d.empty() ? spec.c : spec.d;
    return list.at(static_cast<std::size_t>(j) - 1);
}

}  // namespace

long rho_window(const BSetSpec& spec, long n, long L) {
    if (n < 1) throw std::invalid_argument("rho_window: block length must be >= 1");
    if (L < 0) throw std::invalid_argument("rho_window: offset radius must be >= 0");
    BitWindow w = eta_segment(spec, Int(1 - L), Int(L + n));
    return count_distinct_blocks(w, n, 2 * L + 1);
}

ComplexityParams complexity_params(const BSetSpec& spec, long n, std::optional<Rat> tail) {
    require_counting_family(spec, "complexity_params");
    if (n < 1) throw std::invalid_argument("complexity_params: block length must be >= 1");
    if (spec.horizon < 1) throw std::invalid_argument("complexity_params: no realized parameters");

    ComplexityParams out;
    for (long i = 1; i <= spec.horizon; ++i) out.realized_sum += Rat(1, c_at(spec, i));
    out.tail_bound = tail_or_default(spec, tail);
    out.delta = Rat(1, 2) - out.realized_sum - out.tail_bound;
    if (out.delta <= 0)
        throw std::domain_error(
            "complexity_params: the reciprocal sum leaves no positive density margin");

    out.m_n = (n >= 2) ? static_cast<long>(floor_log2(Int(n))) : 0;
    if (n < 2) return out;  // lg2 n = 0: no threshold to clear

    const long double threshold = out.delta.convert_to<long double>() *
                                  static_cast<long double>(n) /
                                  (2.0L * std::log2(static_cast<long double>(n)));
    constexpr long double kGuard = 1e-12L;
    // Prefix rule: stop at the first level that misses the threshold, so every
    // accepted level individually satisfies the qualifying inequality even if
    // the parameter list is not increasing.
    for (long j = 1; j <= out.m_n; ++j) {
        if (j > spec.horizon)
            throw std::runtime_error("complexity_params: the qualifying-level scan needs parameter index " +
                                     std::to_string(j) + " beyond the realized horizon " +
                                     std::to_string(spec.horizon));
        const long double lhs = Int(pow2(static_cast<unsigned long>(j)) * c_at(spec, j))
                                    .convert_to<long double>();
        if (lhs < threshold * (1 - kGuard)) {
            out.j_n = j;
        } else {
            out.boundary_ambiguous = lhs <= threshold * (1 + kGuard);
            break;
        }
    }
    return out;
}

CrtWitnessReport crt_witnesses(const BSetSpec& spec, long n, std::optional<Rat> tail,
                               long enumeration_cap) {
    require_counting_family(spec, "crt_witnesses");
    const ComplexityParams params = complexity_params(spec, n, tail);

    CrtWitnessReport report;
    report.n = n;
    report.m_n = params.m_n;
    report.j_n = params.j_n;
    if (report.m_n > spec.horizon)
        throw std::runtime_error("crt_witnesses: the congruence system needs parameter indices up to " +
                                 std::to_string(report.m_n) + " beyond the realized horizon " +
                                 std::to_string(spec.horizon));

    for (long j = 1; j <= report.j_n; ++j) report.bound *= c_at(spec, j);
    if (report.bound > enumeration_cap)
        throw std::runtime_error("crt_witnesses: the certificate enumerates " + to_string(report.bound) +
                                 " witness tuples, above the cap " + std::to_string(enumeration_cap));

    // The final congruence clears the block window [x+1, x+n] of every
    // generator with index above m_n: such a multiple y and x are both
    // divisible by 2^(m_n+1) (or 3^(m_n+1)), yet 0 < y - x <= n < 2^(m_n+1).
    // So the realized prefix determines the block exactly.
    const Int deep_clearer = int_pow(2, static_cast<unsigned long>(report.m_n) + 1) *
                             int_pow(3, static_cast<unsigned long>(report.m_n) + 1);

    std::vector<Int> tuple(static_cast<std::size_t>(report.j_n), 0);
    std::unordered_set<std::string> seen;
    while (true) {
        std::vector<std::pair<Int, Int>> congruences;
        for (long j = 1; j <= report.m_n; ++j) {
            const Int modulus = pow2(static_cast<unsigned long>(j)) * c_at(spec, j);
            const Int r_j = (j <= report.j_n) ? tuple[static_cast<std::size_t>(j) - 1] : Int(0);
            congruences.emplace_back(mod_floor(pow2(static_cast<unsigned long>(j)) * r_j, modulus),
                                     modulus);
        }
        congruences.emplace_back(0, deep_clearer);
        const auto solved = crt(congruences);
        if (!solved)
            throw std::logic_error("crt_witnesses: the witness system is always consistent by construction");
        const Int x = solved->first;

        std::vector<std::uint8_t> block(static_cast<std::size_t>(n), 1);
        auto knock_out = [&](const Int& modulus) {
            for (Int s = 1 + mod_floor(-x - 1, modulus); s <= n; s += modulus)
                block[checked_size_t(s - 1, "crt_witnesses: block offset")] = 0;
        };
        for (long j = 1; j <= report.m_n; ++j) {
            knock_out(pow2(static_cast<unsigned long>(j)) * c_at(spec, j));
            if (spec.family == Family::B2)
                knock_out(int_pow(3, static_cast<unsigned long>(j)) * d_at(spec, j));
        }

        report.tuples.push_back(tuple);
        report.positions.push_back(x);
        report.blocks.push_back(block);
        seen.insert(std::string(block.begin(), block.end()));

        long j = report.j_n;
        while (j >= 1 && ++tuple[static_cast<std::size_t>(j) - 1] == c_at(spec, j))
            tuple[static_cast<std::size_t>(j) - 1] = 0, --j;
        if (j < 1) break;
    }

    report.distinct_blocks = static_cast<long>(seen.size());
    report.ok = Int(report.distinct_blocks) >= report.bound;
    return report;
}

ComplexityProfile superpoly_report(const BSetSpec& spec, long n_lo, long n_hi, long L,
                                   std::optional<Rat> tail) {
    if (n_lo < 2) throw std::invalid_argument("superpoly_report: the exponent proxy needs n >= 2");
    if (n_hi < n_lo) throw std::invalid_argument("superpoly_report: empty block-length range");
    if (L < 0) throw std::invalid_argument("superpoly_report: offset radius must be >= 0");

    ComplexityProfile profile;
    profile.L = L;
    const BitWindow w = eta_segment(spec, Int(1 - L), Int(L + n_hi));
    for (long n = n_lo; n <= n_hi; ++n) {
        ComplexityRow row;
        row.n = n;
        row.rho = count_distinct_blocks(w, n, 2 * L + 1);
        row.log_ratio = std::log(static_cast<double>(row.rho)) / std::log(static_cast<double>(n));
        try {
            const ComplexityParams params = complexity_params(spec, n, tail);
            row.m_n = params.m_n;
            row.j_n = params.j_n;
            profile.delta = params.delta;
            profile.has_params = true;
        } catch (const std::exception&) {
            // Families outside the counting argument still get the raw trend.
        }
        profile.rows.push_back(row);
    }
    return profile;
}

}  // namespace bfree
