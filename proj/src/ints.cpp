#include "bfree/ints.hpp"

#include <algorithm>

namespace bfree {

std::vector<std::pair<Int, unsigned long>> factorize(Int n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
    std::vector<std::pair<Int, unsigned long>> out;
    auto strip = [&](const Int& p) {
        unsigned long e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (Int p = 5; p * p <= n; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

Int totient(const Int& n) {
    if (n < 1) throw std::invalid_argument("totient: n must be >= 1");
    Int r = n;
    for (const auto& [p, e] : factorize(n)) {
        (void)e;
        r -= r / p;
    }
    return r;
}

std::vector<Int> sorted_divisors(const Int& n) {
    std::vector<Int> divs{1};
    for (const auto& [p, e] : factorize(n)) {
        const std::size_t base = divs.size();
        Int pe = 1;
        for (unsigned long i = 1; i <= e; ++i) {
            pe *= p;
            for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pe);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::string to_string(const Int& n) { return n.str(); }

std::string to_string(const Rat& q) {
    if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

}  // namespace bfree
