#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bfree/holes.hpp"
#include "bfree/oracle.hpp"

#include <random>

using namespace bfree;

namespace {

BSetSpec b1() {
    BSetSpec s;
    s.family = Family::B1;
    // Long tail: the oracle needs every generator up to the level modulus
    // realized before it can certify its gcd scan complete.
    s.c = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    s.horizon = 12;
    s.name = "b1";
    return s;
}

BSetSpec b1sq() {
    BSetSpec s;
    s.family = Family::B1Cut;
    s.c = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    s.cutoff = 2;
    s.horizon = 12;
    s.name = "b1sq";
    return s;
}

BSetSpec b2() {
    BSetSpec s;
    s.family = Family::B2;
    s.c = {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    s.horizon = 14;
    s.name = "b2";
    return s;
}

bool same_set(const ResidueSet& a, const ResidueSet& b) {
    return a.modulus == b.modulus && rs_equal(a, b);
}

}  // namespace

TEST_CASE("definitional hole scan agrees with the bundled anchors") {
    CHECK(rs_full_residues(naive_holes(b1(), 1)) == std::vector<Int>{2, 4});
    CHECK(rs_full_residues(naive_holes(b1sq(), 1)) == std::vector<Int>{2, 4, 8, 10, 14, 16});
    auto h = naive_holes(b2(), 1);
    CHECK(h.modulus == 30);
    CHECK(h.count() == 16);
    CHECK(rs_contains(h, 2));
    CHECK(rs_contains(h, 3));
}

TEST_CASE("main path and oracle agree level by level") {
    for (const BSetSpec& spec : {b1(), b1sq(), b2()}) {
        CAPTURE(spec.name);
        auto levels = default_filtration(spec, 3);
        for (const LevelData& lvl : levels) {
            CAPTURE(lvl.n);
            CHECK(same_set(holes_level(spec, lvl).holes, naive_holes(spec, lvl.n)));
        }
    }
}

TEST_CASE("window scan matches the full-period scan and handles negatives") {
    auto spec = b2();
    auto fullset = naive_holes(spec, 2);
    auto win = naive_holes_window(spec, 2, -100, 1200);
    for (Int k = -100; k < 1200; ++k)
        CHECK(win.at(k) == (rs_contains(fullset, mod_floor(k, fullset.modulus)) ? 1 : 0));
}

TEST_CASE("insufficient horizon is refused, not silently wrong") {
    BSetSpec s;
    s.family = Family::B1;
    s.c = {3, 5};
    s.horizon = 2;
    s.name = "b1-short";
    // p_2 = 60, while the first unrealized generator is only bounded below
    // by 3 * 2^3 = 24 <= 60: the gcd scan cannot be certified complete.
    CHECK_THROWS_AS(naive_holes(s, 2), std::runtime_error);
    CHECK_NOTHROW(naive_holes(s, 1));
}

TEST_CASE("naive minimal period") {
    CHECK(naive_min_period(residue_set_mod(6, {2, 4})) == 6);
    CHECK(naive_min_period(residue_set_mod(6, {0, 3})) == 3);
    CHECK(naive_min_period(residue_set_mod(12, {})) == 1);
    CHECK(naive_min_period(residue_set_mod(8, {3, 7})) == 4);

    SUBCASE("agrees with the main search on random sets") {
        std::mt19937 rng(20260813);
        for (int trial = 0; trial < 200; ++trial) {
            const long m = 1 + long(rng() % 360);
            std::vector<Int> residues;
            for (long r = 0; r < m; ++r)
                if (rng() % 3 == 0) residues.push_back(r);
            auto rs = residue_set_mod(m, std::move(residues));
            CAPTURE(trial);
            CHECK(naive_min_period(rs) == rs_minimal_period(rs));
        }
    }
}

TEST_CASE("naive block counting") {
    BitWindow w;
    w.start = 0;
    w.bits = {0, 1, 0, 1, 0, 1, 0};
    CHECK(naive_rho(w, 2) == 2);
    CHECK(naive_rho(w, 7) == 1);
    CHECK(naive_rho(w, 8) == 0);

    BitWindow ones;
    ones.start = -3;
    ones.bits = {1, 1, 1, 1, 1, 1};
    CHECK(naive_rho(ones, 1) == 1);
    CHECK(naive_rho(ones, 4) == 1);
}

TEST_CASE("randomized explicit sets: formula path equals definitional path") {
    std::mt19937 rng(97);
    const std::vector<long> pool = {2, 3, 4, 5, 6, 7, 9, 10, 11, 13, 14, 15, 21, 22, 25, 26};
    int done = 0;
    while (done < 60) {
        std::vector<Int> pick;
        const int want = 2 + int(rng() % 3);
        for (int i = 0; i < want; ++i) pick.push_back(pool[rng() % pool.size()]);
        IntSet gens = primitivize(make_set(std::move(pick)));
        if (lcm_of(gens) > 100000) continue;

        BSetSpec spec;
        spec.family = Family::Explicit;
        spec.explicit_b = gens;
        spec.horizon = long(gens.size());
        spec.name = "random-explicit";
        try {
            validate_spec(spec);
        } catch (const std::invalid_argument&) {
            continue;
        }
        auto levels = default_filtration(spec, long(gens.size()));
        const LevelData& top = levels.back();
        CAPTURE(done);
        CHECK(same_set(holes_level(spec, top).holes, naive_holes(spec, top.n)));
        ++done;
    }
}
