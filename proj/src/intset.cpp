#include "bfree/intset.hpp"

#include <algorithm>
#include <stdexcept>

namespace bfree {

IntSet make_set(std::vector<Int> values) {
    for (const Int& v : values)
        if (v < 1) throw std::invalid_argument("make_set: elements must be positive, got " + to_string(v));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

bool set_contains(const IntSet& a, const Int& x) {
    return std::binary_search(a.begin(), a.end(), x);
}

IntSet set_union(const IntSet& a, const IntSet& b) {
    IntSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Int lcm_of(const IntSet& a) {
    Int l = 1;
    for (const Int& v : a) l = lcm(l, v);
    return l;
}

Int gcd_of(const IntSet& a) {
    Int g = 0;
    for (const Int& v : a) g = gcd(g, v);
    return g;
}

IntSet div_transform(const IntSet& a, const Int& k) {
    std::vector<Int> out;
    out.reserve(a.size());
    for (const Int& v : a) out.push_back(v / gcd(v, k));
    return make_set(std::move(out));
}

IntSet perp_subset(const IntSet& a, const Int& k) {
    IntSet out;
    for (const Int& v : a)
        if (coprime(v, k)) out.push_back(v);
    return out;
}

IntSet primitivize(const IntSet& a) {
    IntSet out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        bool dominated = false;
        // Only smaller elements can be proper divisors, and the set is sorted.
        for (std::size_t j = 0; j < i && a[j] * 2 <= a[i]; ++j) {
            if (divides(a[j], a[i])) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(a[i]);
    }
    return out;
}

PrimitivityReport check_primitive(const IntSet& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (divides(a[j], a[i])) return {false, a[j], a[i]};
        }
    }
    return {};
}

bool in_multiples(const IntSet& a, const Int& x) {
    for (const Int& v : a)
        if (divides(v, x)) return true;
    return false;
}

}  // namespace bfree
