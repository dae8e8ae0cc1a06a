#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bfree/toeplitz.hpp>

#include <string>
#include <vector>

using namespace bfree;

namespace {

DirectToeplitzSpec gh() {
    DirectToeplitzSpec s;
    s.kind = ToeplitzKind::gh_variant;
    s.name = "gh";
    return s;
}

// p_k = 4^k with the two adjacent classes {0,1} left open at every level;
// a position newly filled at level k receives (position div p_{k-1}) mod 2.
DirectToeplitzSpec adjacent_pair_skeleton(long depth) {
    DirectToeplitzSpec s;
    s.kind = ToeplitzKind::skeleton;
    s.name = "adjacent-pair";
    Int p = 1;
    std::string prev_fill = "-";
    for (long k = 1; k <= depth; ++k) {
        const Int q = p;
        p *= 4;
        SkeletonLevel lv;
        lv.p = p;
        lv.holes = {0, 1};
        for (Int r = 0; r < p; ++r) {
            const char parent = prev_fill[static_cast<std::size_t>(r % q)];
            if (parent != '-')
                lv.fill += parent;
            else if (r < 2)
                lv.fill += '-';
            else
                lv.fill += static_cast<char>('0' + static_cast<int>((r / q) % 2));
        }
        prev_fill = lv.fill;
        s.levels.push_back(lv);
    }
    return s;
}

std::string bits_of(const BitWindow& w) {
    std::string out;
    for (auto b : w.bits) out += static_cast<char>('0' + b);
    return out;
}

}  // namespace

TEST_CASE("closed-form hole sets of the alternating-fill variant") {
    const auto spec = gh();

    const auto v = validate_direct_spec(spec);
    CHECK(v.nesting_checked_up_to == 3);
    CHECK_FALSE(v.user_asserted_beyond);
    CHECK(direct_level_count(spec) == -1);

    CHECK(rs_full_residues(direct_holes(spec, 1)) == std::vector<Int>{3, 7});
    CHECK(rs_full_residues(direct_holes(spec, 2)) == std::vector<Int>{11, 27});
    CHECK(rs_full_residues(direct_holes(spec, 3)) == std::vector<Int>{43, 107});
    CHECK(rs_full_residues(direct_holes(spec, 4)) == std::vector<Int>{171, 427});

    for (long n = 1; n <= 6; ++n) {
        const ResidueSet h = direct_holes(spec, n);
        CHECK(h.modulus == Int(1) << (2 * n + 1));
        // exactly two holes per period interval, half a period apart
        const auto full = rs_full_residues(h);
        REQUIRE(full.size() == 2);
        CHECK(full[1] - full[0] == h.modulus / 2);
        // the deeper set sits inside the current one
        const ResidueSet deeper = direct_holes(spec, n + 1);
        for (const Int& r : rs_full_residues(deeper)) CHECK(rs_contains(h, r));
    }

    CHECK(direct_period(spec, 3) == 128);
    CHECK_THROWS_AS(direct_holes(spec, 0), std::invalid_argument);
}

TEST_CASE("essential holes of the variant collapse to one class of double the period") {
    const auto spec = gh();
    for (long N = 1; N <= 4; ++N) {
        const auto ess = direct_essential_holes(spec, N, N + 4);
        CHECK(ess.cert.stabilized);
        CHECK(ess.cert.level == N + 1);

        const Int p = Int(1) << (2 * N + 1);
        const Int quarter = p / 2;            // 4^N
        const Int r = (quarter - 1) / 3;      // r_N
        // the surviving class is 4^N*(2Z+1) - r_N, i.e. residue 4^N - r_N mod p_N
        CHECK(rs_full_residues(ess.set) == std::vector<Int>{quarter - r});
        CHECK(ess.set.modulus == p);

        const Int tau_tilde = rs_minimal_period(ess.set);
        const Int tau = rs_minimal_period(direct_holes(spec, N));
        CHECK(tau_tilde == p);
        CHECK(tau_tilde == 2 * tau);

        // of the two level-N holes only one survives the very next level
        CHECK(ess.survivor_counts.front() == 2);
        CHECK(ess.survivor_counts[1] == 1);
    }
}

TEST_CASE("alternating fill resolves each position at its first open level") {
    const auto spec = gh();

    const auto b1 = direct_eta_segment(spec, 0, 16, 1);
    CHECK(bits_of(b1.window) == "0110100001101000");  // unresolved positions read 0
    CHECK(b1.unresolved == std::vector<Int>{3, 7, 11, 15});

    const auto b2 = direct_eta_segment(spec, 0, 16, 2);
    CHECK(bits_of(b2.window) == "0111100101101001");
    CHECK(b2.unresolved == std::vector<Int>{11});

    const auto b3 = direct_eta_segment(spec, 0, 16, 3);
    CHECK(bits_of(b3.window) == "0111100101111001");
    CHECK(b3.unresolved.empty());

    // negative positions follow the same rule
    const auto neg = direct_eta_segment(spec, -8, 0, 6);
    CHECK(bits_of(neg.window) == "01101000");
    CHECK(neg.unresolved.empty());

    SUBCASE("unresolved positions are exactly the budget-level holes") {
        for (long budget = 1; budget <= 5; ++budget) {
            const auto seg = direct_eta_segment(spec, -100, 100, budget);
            const ResidueSet h = direct_holes(spec, budget);
            std::size_t ui = 0;
            for (Int x = -100; x < 100; ++x) {
                const bool unres = ui < seg.unresolved.size() && seg.unresolved[ui] == x;
                if (unres) ++ui;
                CHECK(unres == rs_contains(h, x));
            }
            CHECK(ui == seg.unresolved.size());
        }
    }

    SUBCASE("raising the budget never rewrites a resolved bit") {
        const auto lo = direct_eta_segment(spec, -64, 64, 2);
        const auto hi = direct_eta_segment(spec, -64, 64, 5);
        std::size_t ui = 0;
        for (std::size_t i = 0; i < lo.window.bits.size(); ++i) {
            const Int x = lo.window.start + Int(i);
            if (ui < lo.unresolved.size() && lo.unresolved[ui] == x) {
                ++ui;
                continue;
            }
            CHECK(lo.window.bits[i] == hi.window.bits[i]);
        }
    }

    CHECK_THROWS_AS(direct_eta_segment(spec, 0, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(direct_eta_segment(spec, 4, 0, 1), std::invalid_argument);
}

TEST_CASE("user skeletons are validated level by level") {
    const auto sk = adjacent_pair_skeleton(4);

    const auto v = validate_direct_spec(sk);
    CHECK(v.nesting_checked_up_to == 3);
    CHECK(v.user_asserted_beyond);
    REQUIRE(v.notes.size() == 1);
    CHECK(v.notes[0] == "hole nesting beyond level 3 is user-asserted");
    CHECK(direct_level_count(sk) == 4);

    CHECK(sk.levels[0].fill == "--01");
    CHECK(sk.levels[1].fill == "--01110100011101");

    for (long n = 1; n <= 4; ++n) {
        const ResidueSet h = direct_holes(sk, n);
        CHECK(h.modulus == Int(1) << (2 * n));
        CHECK(rs_full_residues(h) == std::vector<Int>{0, 1});
    }

    // both open classes stay open at every level, so everything is essential
    const auto ess = direct_essential_holes(sk, 1, 4);
    CHECK(rs_equal(ess.set, direct_holes(sk, 1)));
    CHECK(ess.cert.stabilized);

    const auto seg = direct_eta_segment(sk, 0, 16, 4);
    CHECK(bits_of(seg.window) == "0001110100011101");
    CHECK(seg.unresolved == std::vector<Int>{0, 1});

    // a budget beyond the declared levels just stops at the last one
    const auto deep = direct_eta_segment(sk, 0, 16, 9);
    CHECK(deep.window.bits == seg.window.bits);
    CHECK(deep.unresolved == seg.unresolved);

    SUBCASE("a skeleton with no holes is a plain periodic word") {
        DirectToeplitzSpec flat;
        flat.kind = ToeplitzKind::skeleton;
        flat.levels.push_back({4, {}, "0110"});
        const auto full = direct_eta_segment(flat, 0, 8, 1);
        CHECK(bits_of(full.window) == "01100110");
        CHECK(full.unresolved.empty());
    }

    SUBCASE("malformed skeletons are rejected with the offending position") {
        auto reassigned = adjacent_pair_skeleton(3);
        reassigned.levels[1].fill[2] = '1';  // coarser level filled residue 2 with 0
        CHECK_THROWS_WITH_AS(validate_direct_spec(reassigned),
                             "skeleton level 2: position 2 reassigned against the coarser level",
                             std::invalid_argument);

        auto stray_dash = adjacent_pair_skeleton(2);
        stray_dash.levels[1].fill[7] = '-';
        CHECK_THROWS_WITH_AS(validate_direct_spec(stray_dash),
                             "skeleton level 2: '-' at position 7 without a declared hole",
                             std::invalid_argument);

        auto unmarked = adjacent_pair_skeleton(2);
        unmarked.levels[1].holes.push_back(9);
        CHECK_THROWS_WITH_AS(validate_direct_spec(unmarked),
                             "skeleton level 2: declared hole at position 9 not marked '-'",
                             std::invalid_argument);

        auto bad_period = adjacent_pair_skeleton(2);
        bad_period.levels[1].p = 6;
        bad_period.levels[1].holes = {2, 3};
        bad_period.levels[1].fill = "01--01";
        CHECK_THROWS_WITH_AS(validate_direct_spec(bad_period),
                             "skeleton level 2: period not a multiple of the previous one",
                             std::invalid_argument);

        CHECK_THROWS_AS(direct_holes(sk, 5), std::invalid_argument);
        CHECK_THROWS_AS(direct_essential_holes(sk, 1, 5), std::invalid_argument);
    }
}
