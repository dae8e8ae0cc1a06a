#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bfree {

// All core arithmetic runs on arbitrary-precision integers.  Level moduli
// grow multiplicatively with the level, so fixed-width types overflow almost
// immediately on realistic inputs.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

// Floor-convention remainder: result is always in [0, m).  cpp_int's % keeps
// the sign of the dividend, which is the wrong convention for residue work.
inline Int mod_floor(const Int& a, const Int& m) {
    if (m <= 0) throw std::invalid_argument("mod_floor: modulus must be positive");
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline bool divides(const Int& d, const Int& n) {
    if (d == 0) return n == 0;
    return n % d == 0;
}

inline bool coprime(const Int& a, const Int& b) { return gcd(a, b) == 1; }

inline Int int_pow(Int base, unsigned long e) {
    Int r = 1;
    while (e > 0) {
        if (e & 1UL) r *= base;
        base *= base;
        e >>= 1UL;
    }
    return r;
}

inline Int pow2(unsigned long e) { return Int(1) << e; }

// Largest e with 2^e | n (n != 0).
inline unsigned long two_adic_valuation(Int n) {
    if (n == 0) throw std::invalid_argument("two_adic_valuation: n must be nonzero");
    if (n < 0) n = -n;
    unsigned long v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    return v;
}

// Largest e with p^e | n (n != 0, p >= 2).
inline unsigned long adic_valuation(Int n, const Int& p) {
    if (n == 0) throw std::invalid_argument("adic_valuation: n must be nonzero");
    if (p < 2) throw std::invalid_argument("adic_valuation: base must be >= 2");
    if (n < 0) n = -n;
    unsigned long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// floor(log2(n)) for n >= 1.
inline unsigned long floor_log2(const Int& n) {
    if (n < 1) throw std::invalid_argument("floor_log2: n must be >= 1");
    return static_cast<unsigned long>(boost::multiprecision::msb(n));
}

inline std::size_t checked_size_t(const Int& n, const char* what) {
    if (n < 0 || n > Int(std::numeric_limits<std::size_t>::max() / 2))
        throw std::overflow_error(std::string(what) + ": value does not fit a host-size index");
    return static_cast<std::size_t>(n);
}

// Trial-division factorization; adequate for the moduli this library sees
// (divisor scans and totients are only ever run on per-level periods).
std::vector<std::pair<Int, unsigned long>> factorize(Int n);

// Euler's totient via trial division up to sqrt(n).
Int totient(const Int& n);

// All positive divisors, sorted ascending.
std::vector<Int> sorted_divisors(const Int& n);

std::string to_string(const Int& n);
std::string to_string(const Rat& q);

}  // namespace bfree
