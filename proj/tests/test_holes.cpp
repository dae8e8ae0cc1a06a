#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bfree/holes.hpp"

#include <algorithm>

using namespace bfree;

namespace {

BSetSpec b1() {
    BSetSpec s;
    s.family = Family::B1;
    s.c = {3, 5, 7, 11, 13, 17};
    s.horizon = 6;
    s.name = "b1";
    return s;
}

BSetSpec b1sq() {
    BSetSpec s;
    s.family = Family::B1Cut;
    s.c = {3, 5, 7, 11, 13, 17};
    s.cutoff = 2;
    s.horizon = 6;
    s.name = "b1sq";
    return s;
}

BSetSpec b2() {
    BSetSpec s;
    s.family = Family::B2;
    s.c = {5, 7, 11, 13, 17};
    s.horizon = 5;
    s.name = "b2";
    return s;
}

BSetSpec chain() {
    BSetSpec s;
    s.family = Family::ProductChain;
    s.q = {5, 7, 11, 13, 29};
    s.c = {3, 17, 19, 23, 31};
    s.horizon = 5;
    s.name = "chain";
    return s;
}

std::vector<Int> full(const ResidueSet& s) { return rs_full_residues(s); }

}  // namespace

TEST_CASE("level hole sets of the bundled families") {
    SUBCASE("b1 level 1: even non-multiples of 6") {
        auto spec = b1();
        auto levels = default_filtration(spec, 2);
        HolesReport rep = holes_level(spec, levels[0]);
        CHECK(rep.p == 6);
        CHECK(rep.warnings.empty());
        CHECK(full(rep.holes) == std::vector<Int>{2, 4});
        REQUIRE(rep.components.size() == 1);
        CHECK(rep.components[0].a == 2);
        CHECK(rep.components[0].reduced == IntSet{3});
        CHECK(rep.components[0].period == 6);
    }

    SUBCASE("b1 squared level 1: modulus 18, but the set is 6-periodic") {
        auto spec = b1sq();
        auto levels = default_filtration(spec, 2);
        HolesReport rep = holes_level(spec, levels[0]);
        CHECK(rep.p == 18);
        CHECK(full(rep.holes) == std::vector<Int>{2, 4, 8, 10, 14, 16});
        // The only arm is 2Z \ M_{6,9} = 2(Z \ 3Z): internal period 6.
        CHECK(rep.holes.period == 6);
        REQUIRE(rep.components.size() == 1);
        CHECK(rep.components[0].reduced == IntSet{3});
    }

    SUBCASE("b2 level 1: sixteen residues mod 30 with the adjacent pair 2,3") {
        auto spec = b2();
        auto levels = default_filtration(spec, 2);
        HolesReport rep = holes_level(spec, levels[0]);
        CHECK(rep.p == 30);
        CHECK(rep.holes.count() == 16);
        CHECK(rs_contains(rep.holes, 2));
        CHECK(rs_contains(rep.holes, 3));
        CHECK(!rs_contains(rep.holes, 0));
        CHECK(!rs_contains(rep.holes, 10));
        CHECK(!rs_contains(rep.holes, 15));
        CHECK(rs_minimal_period(rep.holes) == 30);
        REQUIRE(rep.components.size() == 2);
    }

    SUBCASE("product chain level 1: everything off the single generator") {
        auto spec = chain();
        auto levels = default_filtration(spec, 2);
        HolesReport rep = holes_level(spec, levels[0]);
        CHECK(rep.p == 15);
        CHECK(rep.holes.count() == 14);
        CHECK(rs_contains(rep.holes, 1));
        CHECK(!rs_contains(rep.holes, 0));
    }

    SUBCASE("unsaturated levels are rejected") {
        auto spec = b1();
        auto levels = default_filtration(spec, 1);
        levels[0].saturated = false;
        CHECK_THROWS_AS(holes_level(spec, levels[0]), std::invalid_argument);
    }
}

TEST_CASE("degraded paths carry warnings instead of failing") {
    SUBCASE("redundant generator: formula still runs, tautness warning raised") {
        BSetSpec spec;
        spec.family = Family::Explicit;
        spec.explicit_b = {10, 15, 30};  // 30 is redundant: the set is not taut
        spec.horizon = 3;
        LevelData lvl;
        lvl.n = 1;
        lvl.S = {10, 15, 30};
        lvl.ell = 30;
        lvl.A = {AEntry{2, SourceClass::finite_source, 0},
                 AEntry{10, SourceClass::member_of_s, 0},
                 AEntry{15, SourceClass::member_of_s, 0},
                 AEntry{30, SourceClass::member_of_s, 0}};
        lvl.saturated = true;
        HolesReport rep = holes_level(spec, lvl);
        REQUIRE(rep.warnings.size() == 1);
        CHECK(rep.warnings[0].find("not taut") != std::string::npos);
        CHECK(rs_contains(rep.holes, 2));
    }

    SUBCASE("a gcd value that is itself covered by S yields an empty arm") {
        BSetSpec spec;
        spec.family = Family::Explicit;
        spec.explicit_b = {10, 15};
        spec.horizon = 2;
        LevelData lvl;
        lvl.n = 1;
        lvl.S = {10, 15};
        lvl.ell = 30;
        lvl.A = {AEntry{20, SourceClass::finite_source, 0}};  // 10 | 20: empty
        lvl.saturated = true;
        HolesReport rep = holes_level(spec, lvl);
        CHECK(rep.holes.empty());
        CHECK(rep.components.empty());
        REQUIRE(rep.warnings.size() == 1);
        CHECK(rep.warnings[0].find("empty") != std::string::npos);
    }
}

TEST_CASE("essential holes by iterated filtering") {
    SUBCASE("b1: the level-1 holes survive every deeper level") {
        auto spec = b1();
        auto levels = default_filtration(spec, 3);
        auto res = essential_holes_iterative(spec, levels, 1, 3);
        CHECK(full(res.set) == std::vector<Int>{2, 4});
        CHECK(res.cert.stabilized);
        CHECK(res.cert.level == 1);
        CHECK(res.survivor_counts == std::vector<Int>{2, 2, 2});
    }

    SUBCASE("product chain: level 1 loses the classes outside 5Z") {
        auto spec = chain();
        auto levels = default_filtration(spec, 4);
        auto res = essential_holes_iterative(spec, levels, 1, 4);
        CHECK(full(res.set) == std::vector<Int>{5, 10});
        CHECK(res.cert.stabilized);
        CHECK(res.cert.level == 2);
        // k = 1 is a hole at level 1 but not an essential one.
        HolesReport rep = holes_level(spec, levels[0]);
        CHECK(rs_contains(rep.holes, 1));
        CHECK(!rs_contains(res.set, 1));
        CHECK(rs_subset(res.set, rep.holes));
        // Counts only ever shrink.
        for (std::size_t i = 1; i < res.survivor_counts.size(); ++i)
            CHECK(res.survivor_counts[i] <= res.survivor_counts[i - 1]);
    }

    SUBCASE("too short a run is reported as truncated") {
        auto spec = chain();
        auto levels = default_filtration(spec, 3);
        auto res = essential_holes_iterative(spec, levels, 1, 3);
        CHECK(full(res.set) == std::vector<Int>{5, 10});
        CHECK(!res.cert.stabilized);
        CHECK(res.cert.level == 3);
    }
}

TEST_CASE("minimal periods by direct search") {
    CHECK(minimal_period(residue_set_mod(6, {2, 4})).tau == 6);
    CHECK(minimal_period(residue_set_mod(8, {3, 7})).tau == 4);
    CHECK(minimal_period(residue_set_mod(6, {0, 1, 2, 3, 4, 5})).tau == 1);
    CHECK(minimal_period(residue_set_mod(12, {})).tau == 1);
    CHECK(minimal_period(residue_set_mod(6, {2, 4})).certified_by == "direct-search");
}

TEST_CASE("closed-form periods of single-arm sets") {
    CHECK(period_formula_singleton(4, {6, 9}) == 12);
    CHECK(period_formula_singleton(2, {6}) == 6);
    CHECK(period_formula_singleton(1, {2}) == 2);
    CHECK_THROWS_AS(period_formula_singleton(6, {2, 9}), std::domain_error);
    CHECK_THROWS_AS(period_formula_singleton(3, {3}), std::domain_error);

    SUBCASE("cross-checked against a sieve mod 36") {
        std::vector<Int> residues;
        for (Int k = 0; k < 36; k += 4)
            if (k % 6 != 0 && k % 9 != 0) residues.push_back(k);
        auto rep = period_report_singleton(4, {6, 9}, residue_set_mod(36, std::move(residues)));
        CHECK(rep.tau == 12);
        CHECK(rep.certified_by == "singleton-formula");
    }
}

TEST_CASE("closed-form periods of union sets") {
    CHECK(period_formula_union({2, 3}, {10, 15}) == 30);
    CHECK(period_formula_union({2}, {6}) == 6);

    SUBCASE("hypothesis evaluation") {
        CHECK(union_formula_hypothesis({2, 3}, {4}).ok);
        CHECK(period_formula_union({2, 3}, {4}) == 12);

        // Non-primitive transforms are fine as long as the arms jointly keep
        // the full lcm: this is the b2 level-1 situation.
        auto h0 = union_formula_hypothesis({2, 3}, {10, 15});
        CHECK(h0.ok);
        CHECK(h0.period == 30);
        CHECK(h0.lcm_all == 30);
        CHECK(h0.coarse_transforms == IntSet{2, 3});

        auto h1 = union_formula_hypothesis({2, 3}, {2});
        CHECK(!h1.ok);
        CHECK(h1.offender == 2);
        CHECK(h1.reason == "contains-1");
        CHECK_THROWS_AS(period_formula_union({2, 3}, {2}), std::domain_error);

        // Here the collapse is real: 4Z \ M_{6,9} = 4Z \ 3Z has period 12,
        // not lcm{4,6,9} = 36, so the formula must refuse.
        auto h2 = union_formula_hypothesis({4}, {6, 9});
        CHECK(!h2.ok);
        CHECK(h2.offender == 4);
        CHECK(h2.reason == "period-below-lcm");
        CHECK(h2.period == 12);
        CHECK_THROWS_AS(period_formula_union({4}, {6, 9}), std::domain_error);

        auto h3 = union_formula_hypothesis({2, 4}, {9});
        CHECK(!h3.ok);
        CHECK(h3.offender == 4);
        CHECK(h3.reason == "A-not-primitive");
    }

    SUBCASE("cross-checked against a sieve mod 12") {
        std::vector<Int> residues;
        for (Int k = 0; k < 12; ++k)
            if ((k % 2 == 0 || k % 3 == 0) && k % 4 != 0) residues.push_back(k);
        auto rep = period_report_union({2, 3}, {4}, residue_set_mod(12, std::move(residues)));
        CHECK(rep.tau == 12);
        CHECK(rep.certified_by == "union-formula");
    }

    SUBCASE("b1 level 2 holes have period equal to the full modulus") {
        auto spec = b1();
        auto levels = default_filtration(spec, 2);
        HolesReport rep = holes_level(spec, levels[1]);
        CHECK(rep.p == 60);
        auto pr = period_report_union({4}, levels[1].S, rep.holes);
        CHECK(pr.tau == 60);
    }
}
