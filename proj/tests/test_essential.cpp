#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bfree/essential.hpp"

#include <algorithm>
#include <vector>

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

BSetSpec twof() {
    BSetSpec s;
    s.family = Family::TwoFiltrations;
    s.q = {3, 5, 7, 11, 13, 41};
    s.c = {17, 19, 23, 29, 31, 43};
    s.d = {37, 47, 53, 59, 61, 67};
    s.horizon = 6;
    s.name = "twof";
    return s;
}

std::vector<std::vector<Int>> chains_of(const std::vector<AASequence>& seqs) {
    std::vector<std::vector<Int>> out;
    for (const auto& s : seqs) out.push_back(s.values);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("chain enumeration through the levels") {
    SUBCASE("b1: one chain of doubling powers") {
        auto spec = b1();
        auto levels = default_filtration(spec, 4);
        auto seqs = enumerate_aA_sequences(levels, 1, 2, 2);
        REQUIRE(seqs.size() == 1);
        CHECK(seqs[0].values == std::vector<Int>{2, 4, 8});
        CHECK(seqs[0].depth() == 2);
        // depth 0 is just the starting value
        auto base = enumerate_aA_sequences(levels, 1, 2, 0);
        REQUIRE(base.size() == 1);
        CHECK(base[0].values == std::vector<Int>{2});
    }

    SUBCASE("b2: the 2-power and 3-power chains never mix") {
        auto spec = b2();
        auto levels = default_filtration(spec, 3);
        CHECK(chains_of(enumerate_aA_sequences(levels, 1, 2, 2)) ==
              std::vector<std::vector<Int>>{{2, 4, 8}});
        CHECK(chains_of(enumerate_aA_sequences(levels, 1, 3, 2)) ==
              std::vector<std::vector<Int>>{{3, 9, 27}});
    }

    SUBCASE("product chain: dead ends and transient branches") {
        auto spec = chain();
        auto levels = default_filtration(spec, 4);
        // depth 1 keeps the stalled value 5->5, since level 2 still offers it
        CHECK(chains_of(enumerate_aA_sequences(levels, 1, 5, 1)) ==
              std::vector<std::vector<Int>>{{5, 5}, {5, 35}});
        // at depth 2 the 5->5 branch has no continuation and disappears
        CHECK(chains_of(enumerate_aA_sequences(levels, 1, 5, 2)) ==
              std::vector<std::vector<Int>>{{5, 35, 35}, {5, 35, 385}});
        // at depth 3 the 35->35 stall dies in turn
        CHECK(chains_of(enumerate_aA_sequences(levels, 1, 5, 3)) ==
              std::vector<std::vector<Int>>{{5, 35, 385, 385}, {5, 35, 385, 5005}});
    }

    SUBCASE("two filtrations, extended levels: the finite branch dies") {
        auto spec = twof();
        FiltrationOptions ext;
        ext.kind = FiltrationKind::extended;
        auto levels = default_filtration(spec, 3, ext);
        CHECK(chains_of(enumerate_aA_sequences(levels, 1, 4, 1)) ==
              std::vector<std::vector<Int>>{{4, 8}, {4, 56}});
        CHECK(chains_of(enumerate_aA_sequences(levels, 1, 4, 2)) ==
              std::vector<std::vector<Int>>{{4, 8, 16}, {4, 8, 176}});
    }

    SUBCASE("starting values are validated") {
        auto spec = b1();
        auto levels = default_filtration(spec, 3);
        CHECK_THROWS_WITH_AS(enumerate_aA_sequences(levels, 1, 6, 1),
                             doctest::Contains("belongs to S"), std::invalid_argument);
        CHECK_THROWS_WITH_AS(enumerate_aA_sequences(levels, 1, 7, 1),
                             doctest::Contains("not a gcd value"), std::invalid_argument);
    }
}

TEST_CASE("level shadows of single chains") {
    SUBCASE("b1: the chain 2,4,8 sees only the first generator") {
        auto spec = b1();
        auto levels = default_filtration(spec, 3);
        auto res = S_of_sequence(AASequence{1, {2, 4, 8}}, spec, levels);
        CHECK(res.set == IntSet{6});
        CHECK(res.truncated);
        CHECK(res.scan_bound == 24);
    }

    SUBCASE("b2: both chains shadow the full level set") {
        auto spec = b2();
        auto levels = default_filtration(spec, 3);
        CHECK(S_of_sequence(AASequence{1, {2, 4, 8}}, spec, levels).set == IntSet{10, 15});
        CHECK(S_of_sequence(AASequence{1, {3, 9, 27}}, spec, levels).set == IntSet{10, 15});
    }

    SUBCASE("product chain: deep joins stay within the realized primes") {
        auto spec = chain();
        auto levels = default_filtration(spec, 4);
        CHECK(S_of_sequence(AASequence{1, {5, 35, 385}}, spec, levels).set == IntSet{15});
        CHECK(S_of_sequence(AASequence{1, {5, 35, 385, 5005}}, spec, levels).set == IntSet{15});
    }

    SUBCASE("two filtrations, extended: the adjoined branch generator shows up as gcd 20") {
        auto spec = twof();
        FiltrationOptions ext;
        ext.kind = FiltrationKind::extended;
        auto levels = default_filtration(spec, 2, ext);
        auto res = S_of_sequence(AASequence{1, {4, 8}}, spec, levels);
        CHECK(res.set == IntSet{12, 20, 102, 222, 380});
        CHECK(S_of_sequence(AASequence{1, {4, 56}}, spec, levels).set == IntSet{12, 20, 102, 222, 380});
    }

    SUBCASE("deep natural chains still scan: every join prime is a realized parameter") {
        auto spec = twof();
        auto levels = default_filtration(spec, 6);
        // the 2-power 2^7 exceeds the horizon, but unrealized generators all
        // carry a fresh parameter the join provably lacks
        auto res = S_of_sequence(AASequence{1, {4, 8, 16, 32, 64, 128}}, spec, levels);
        CHECK(res.set == IntSet{12, 102, 222});
    }

    SUBCASE("a hand-built level with an uncertifiable join is refused") {
        auto spec = b1();
        std::vector<LevelData> fake(1);
        fake[0].n = 1;
        fake[0].S = IntSet{5888};  // 2^8 * 23: both factors outrun the lists
        fake[0].ell = 5888;
        CHECK_THROWS_WITH_AS(S_of_sequence(AASequence{1, {2}}, spec, fake),
                             doctest::Contains("insufficient horizon"), std::runtime_error);
    }
}

TEST_CASE("combined shadow sets per starting value") {
    SUBCASE("b1 and b2 reproduce their level sets") {
        auto spec1 = b1();
        auto levels1 = default_filtration(spec1, 3);
        auto r1 = S_of_a(spec1, levels1, 1, 2, 2);
        CHECK(r1.computed);
        CHECK(r1.set == IntSet{6});
        CHECK(r1.sequence_count == 1);

        auto spec2 = b2();
        auto levels2 = default_filtration(spec2, 3);
        CHECK(S_of_a(spec2, levels2, 1, 2, 2).set == IntSet{10, 15});
        CHECK(S_of_a(spec2, levels2, 1, 3, 2).set == IntSet{10, 15});
    }

    SUBCASE("product chain: two chains, one distinct shadow") {
        auto spec = chain();
        auto levels = default_filtration(spec, 3);
        auto r = S_of_a(spec, levels, 1, 5, 2);
        CHECK(r.set == IntSet{15});
        CHECK(r.sequence_count == 2);
    }

    SUBCASE("two filtrations, extended: the shadow is primitivized") {
        auto spec = twof();
        FiltrationOptions ext;
        ext.kind = FiltrationKind::extended;
        auto levels = default_filtration(spec, 2, ext);
        auto r = S_of_a(spec, levels, 1, 4, 1);
        CHECK(r.computed);
        CHECK(r.sequence_count == 2);
        // 380 = 19 * 20 drops out of {12, 20, 102, 222, 380}
        CHECK(r.set == IntSet{12, 20, 102, 222});
    }
}

TEST_CASE("arithmetic essential holes agree with the iterative filter") {
    SUBCASE("b1: essential equals plain holes") {
        auto spec = b1();
        auto levels = default_filtration(spec, 4);
        auto arith = essential_holes_arithmetic(spec, levels, 1, 2);
        CHECK(rs_full_residues(arith.set) == std::vector<Int>{2, 4});
        CHECK(arith.depth_stable);
        REQUIRE(arith.components.size() == 1);
        CHECK(arith.components[0].a == 2);
        CHECK(arith.components[0].S_a == IntSet{6});

        auto iter = essential_holes_iterative(spec, levels, 1, 4);
        CHECK(rs_equal(arith.set, iter.set));
        CHECK(rs_equal(arith.set, holes_level(spec, levels[0]).holes));
    }

    SUBCASE("b1 squared: essential equals plain holes despite the square generator") {
        auto spec = b1sq();
        auto levels = default_filtration(spec, 4);
        auto arith = essential_holes_arithmetic(spec, levels, 1, 2);
        CHECK(rs_full_residues(arith.set) == std::vector<Int>{2, 4, 8, 10, 14, 16});
        CHECK(arith.depth_stable);
        CHECK(rs_equal(arith.set, essential_holes_iterative(spec, levels, 1, 4).set));
    }

    SUBCASE("b2: both components survive at full size") {
        auto spec = b2();
        auto levels = default_filtration(spec, 4);
        auto arith = essential_holes_arithmetic(spec, levels, 1, 2);
        REQUIRE(arith.components.size() == 2);
        CHECK(arith.components[0].a == 2);
        CHECK(arith.components[1].a == 3);
        CHECK(arith.depth_stable);
        CHECK(rs_equal(arith.set, holes_level(spec, levels[0]).holes));
        CHECK(rs_equal(arith.set, essential_holes_iterative(spec, levels, 1, 4).set));
    }

    SUBCASE("product chain: essential is a strict subset with witness 1") {
        auto spec = chain();
        auto levels = default_filtration(spec, 4);
        auto arith = essential_holes_arithmetic(spec, levels, 1, 2);
        CHECK(rs_full_residues(arith.set) == std::vector<Int>{5, 10});
        CHECK(arith.depth_stable);

        auto holes = holes_level(spec, levels[0]).holes;
        CHECK(rs_contains(holes, 1));
        CHECK_FALSE(rs_contains(arith.set, 1));
        CHECK(rs_subset(arith.set, holes));
        CHECK_FALSE(rs_equal(arith.set, holes));
        CHECK(rs_equal(arith.set, essential_holes_iterative(spec, levels, 1, 4).set));
    }

    SUBCASE("product chain at level 2") {
        auto spec = chain();
        auto levels = default_filtration(spec, 4);
        auto arith = essential_holes_arithmetic(spec, levels, 2, 1);
        REQUIRE(arith.components.size() == 1);
        CHECK(arith.components[0].a == 35);
        CHECK(arith.components[0].S_a == IntSet{15, 119});
        CHECK(arith.depth_stable);
        CHECK(rs_equal(arith.set, essential_holes_iterative(spec, levels, 2, 4).set));
        // the whole difference between holes and essential holes at level 2
        // is again the coprime residues contributed by gcd value 1
        CHECK(minimal_period(arith.set).tau == 1785);
    }

    SUBCASE("two filtrations, natural levels: nothing is lost") {
        auto spec = twof();
        auto levels = default_filtration(spec, 4);
        auto arith = essential_holes_arithmetic(spec, levels, 1, 2);
        CHECK(arith.depth_stable);
        CHECK(rs_equal(arith.set, holes_level(spec, levels[0]).holes));
        CHECK(rs_equal(arith.set, essential_holes_iterative(spec, levels, 1, 4).set));
    }

    SUBCASE("two filtrations, extended levels: a strict drop with period tau / 19") {
        auto spec = twof();
        FiltrationOptions ext;
        ext.kind = FiltrationKind::extended;
        auto levels = default_filtration(spec, 4, ext);
        auto arith = essential_holes_arithmetic(spec, levels, 1, 2);
        CHECK(arith.depth_stable);

        auto holes = holes_level(spec, levels[0]).holes;
        CHECK(rs_subset(arith.set, holes));
        // 20 is free of the extended level set but every deep level kills it
        CHECK(rs_contains(holes, 20));
        CHECK_FALSE(rs_contains(arith.set, 20));

        CHECK(minimal_period(holes).tau == 1140);
        CHECK(minimal_period(arith.set).tau == 60);

        CHECK(rs_equal(arith.set, essential_holes_iterative(spec, levels, 1, 4).set));
    }
}

TEST_CASE("divisor shortcut for the essential set") {
    SUBCASE("families whose deep joins meet no new generator") {
        for (auto spec : {b1(), b2()}) {
            auto levels = default_filtration(spec, 3);
            auto rep = gh_shortcut_check(spec, levels, 1, 3);
            CHECK(rep.holds);
            CHECK(rep.scan_complete);
        }
        auto spec = chain();
        auto levels = default_filtration(spec, 4);
        auto rep = gh_shortcut_check(spec, levels, 1, 4);
        CHECK(rep.holds);
        CHECK(rep.scan_complete);
    }

    SUBCASE("two filtrations: natural holds, extended fails with the branch generator") {
        auto spec = twof();
        auto natural = default_filtration(spec, 3);
        CHECK(gh_shortcut_check(spec, natural, 1, 3).holds);

        FiltrationOptions ext;
        ext.kind = FiltrationKind::extended;
        auto levels = default_filtration(spec, 3, ext);
        auto rep = gh_shortcut_check(spec, levels, 1, 3);
        CHECK_FALSE(rep.holds);
        CHECK(rep.n == 2);
        CHECK(rep.a == 8);
        CHECK(rep.b == 40);  // 2^3 q_2: divides lcm(8, level-1 modulus), outside S
    }
}
