#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bfree/residueset.hpp"

#include <random>

using namespace bfree;

TEST_CASE("construction and membership") {
    auto s = residue_set_mod(Int(6), {Int(2), Int(4), Int(8)});
    CHECK(s.residues == std::vector<Int>{2, 4});  // 8 = 2 mod 6
    CHECK(rs_contains(s, Int(2)));
    CHECK(rs_contains(s, Int(-4)));  // -4 = 2 mod 6
    CHECK_FALSE(rs_contains(s, Int(3)));
    CHECK(s.count() == 2);

    CHECK_THROWS(make_residue_set(Int(12), Int(5), {}));  // 5 does not divide 12

    auto packed = make_residue_set(Int(60), Int(6), {Int(2), Int(4)});
    CHECK(packed.count() == 20);
    CHECK(rs_contains(packed, Int(8)));
    CHECK(rs_full_residues(packed).size() == 20);
}

TEST_CASE("set algebra over mixed internal periods") {
    // evens mod 12 stored compactly, multiples of 3 mod 12 stored fully
    auto evens = make_residue_set(Int(12), Int(2), {Int(0)});
    auto threes = make_residue_set(Int(12), Int(3), {Int(0)});
    auto inter = rs_intersect(evens, threes);
    CHECK(inter.period == 6);
    CHECK(inter.residues == std::vector<Int>{0});

    auto uni = rs_union(evens, threes);
    CHECK(rs_full_residues(uni) == std::vector<Int>{0, 2, 3, 4, 6, 8, 9, 10});

    auto diff = rs_difference(evens, threes);
    CHECK(rs_full_residues(diff) == std::vector<Int>{2, 4, 8, 10});

    CHECK(rs_equal(evens, make_residue_set(Int(12), Int(4), {Int(0), Int(2)})));
    CHECK(rs_subset(inter, evens));
    CHECK(rs_subset(inter, threes));
    CHECK_FALSE(rs_subset(evens, threes));
}

TEST_CASE("shift and progression queries") {
    auto s = make_residue_set(Int(32), Int(8), {Int(3), Int(7)});
    auto t = rs_shift(s, Int(1));
    CHECK(t.residues == std::vector<Int>{0, 4});

    // {3,7} + 8Z meets 3 + 4Z (3 = 3 mod 4, 7 = 3 mod 4)
    CHECK(rs_meets_progression(s, Int(3), Int(4)));
    CHECK_FALSE(rs_meets_progression(s, Int(0), Int(4)));
    CHECK(rs_meets_progression(s, Int(7), Int(32)));
    CHECK_FALSE(rs_meets_progression(s, Int(5), Int(32)));
}

TEST_CASE("minimal period") {
    // {3, 7} mod 8: shifting by 4 swaps the two residues -> period 4
    auto s = residue_set_mod(Int(8), {Int(3), Int(7)});
    CHECK(rs_minimal_period(s) == 4);

    // a full congruence class has period equal to its modulus
    auto cls = residue_set_mod(Int(8), {Int(5)});
    CHECK(rs_minimal_period(cls) == 8);

    CHECK(rs_minimal_period(residue_set_mod(Int(360), {})) == 1);
    auto all = make_residue_set(Int(360), Int(1), {Int(0)});
    CHECK(rs_minimal_period(all) == 1);

    // compressed and expanded representations agree
    auto packed = make_residue_set(Int(240), Int(12), {Int(2), Int(8)});
    auto full = residue_set_mod(Int(240), rs_full_residues(packed));
    CHECK(rs_minimal_period(packed) == rs_minimal_period(full));
    CHECK(rs_minimal_period(packed) == 6);
}

TEST_CASE("randomized agreement between compressed and explicit forms") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const long t = 2 * (1 + (long)(rng() % 18));
        const long mult = 1 + (long)(rng() % 6);
        const Int period = t, modulus = t * mult;
        std::vector<Int> res;
        for (long r = 0; r < t; ++r)
            if (rng() % 3 == 0) res.push_back(r);
        auto a = make_residue_set(modulus, period, res);
        auto b = residue_set_mod(modulus, rs_full_residues(a));
        CHECK(rs_equal(a, b));
        CHECK(a.count() == Int(b.residues.size()));
        CHECK(rs_minimal_period(a) == rs_minimal_period(b));
        for (int probe = 0; probe < 20; ++probe) {
            Int x = Int(rng() % 1000) - 500;
            CHECK(rs_contains(a, x) == rs_contains(b, x));
        }
        Int k = Int(rng() % 50) - 25;
        CHECK(rs_equal(rs_shift(a, k), rs_shift(b, k)));
    }
}