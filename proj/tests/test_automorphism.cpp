#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bfree/automorphism.hpp>

#include <utility>
#include <vector>

using namespace bfree;

namespace {

// Square-extended family with one square generator: {6, 9, 20, 56, ...}.
BSetSpec square_once() {
    BSetSpec s;
    s.family = Family::B1Cut;
    s.cutoff = 2;
    s.c = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    s.horizon = 10;
    s.name = "square-once";
    return s;
}

// Square generators at every index: {6, 9, 20, 50, 56, 196, ...}.
BSetSpec square_all() {
    BSetSpec s;
    s.family = Family::B1Cut;
    s.cutoff = -1;
    s.c = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    s.horizon = 24;
    s.name = "square-all";
    return s;
}

}  // namespace

TEST_CASE("the level map reads ahead on one residue class and advances the phase") {
    const BSetSpec spec = square_once();
    const BlockMap m = f_ell_map(spec, 1);
    CHECK(m.q == 6);
    CHECK(m.p_ell == 18);
    CHECK(m.c_ell == 3);
    CHECK(m.radius() == 6);

    const PhasedWindow in = phased_eta(spec, 0, 0, 14, m.p_ell);
    REQUIRE(in.window.bits.size() == 15);  // both endpoints included
    CHECK(in.phase == 0);

    const PhasedWindow out = apply_block_map(m, in);
    CHECK(out.window.start == 0);
    CHECK(out.window.end_exclusive() == 9);
    CHECK(out.phase == 6);
    // positions 0, 3, 6 read 6 ahead (the square generator kills 9 -> bit 0
    // at s = 3); everything else copies in place
    const std::vector<std::uint8_t> expected = {0, 1, 1, 0, 1, 1, 0, 1, 1};
    CHECK(out.window.bits == expected);

    SUBCASE("a nonzero phase moves the reading class") {
        const PhasedWindow in1 = phased_eta(spec, 1, 0, 14, m.p_ell);
        CHECK(in1.phase == 1);
        const PhasedWindow out1 = apply_block_map(m, in1);
        CHECK(out1.phase == 7);
        const BitWindow eta = eta_segment(spec, 0, 25);
        for (Int s = 0; s < 8; ++s) {
            const Int src = s + 1 + (mod_floor(s + 1, 3) == 0 ? m.q : Int(0));
            CHECK(out1.window.at(s) == eta.at(src));
        }
    }

    SUBCASE("shift powers translate the window and the phase") {
        const PhasedWindow shifted = apply_block_map(shift_power(2), in);
        CHECK(shifted.window.start == 0);
        CHECK(shifted.window.end_exclusive() == 13);
        for (Int s = 0; s < 13; ++s) CHECK(shifted.window.at(s) == in.window.at(s + 2));

        const PhasedWindow back = apply_block_map(shift_power(-3), in);
        CHECK(back.window.start == 3);
        CHECK(back.window.end_exclusive() == 15);
        CHECK(back.phase == mod_floor(Int(-3), Int(18)));
    }

    SUBCASE("windows shorter than the radius are rejected") {
        const PhasedWindow tiny = phased_eta(spec, 0, 0, 5, m.p_ell);
        CHECK_THROWS_AS(apply_block_map(m, tiny), std::invalid_argument);
        CHECK_THROWS_AS(apply_block_map(shift_power(9), tiny), std::invalid_argument);
    }

    SUBCASE("the phase modulus must match the map") {
        const PhasedWindow wrong = phased_eta(spec, 0, 0, 14, 6);
        CHECK_THROWS_AS(apply_block_map(m, wrong), std::invalid_argument);
    }

    SUBCASE("the map needs the square structure") {
        CHECK_THROWS_AS(f_ell_map(spec, 2), std::invalid_argument);   // at the cutoff
        CHECK_THROWS_AS(f_ell_map(spec, 0), std::invalid_argument);
        BSetSpec plain = spec;
        plain.family = Family::B1;
        plain.cutoff = -1;
        CHECK_THROWS_AS(f_ell_map(plain, 1), std::invalid_argument);
        CHECK_THROWS_AS(f_ell_map(square_all(), 99), std::invalid_argument);
    }
}

TEST_CASE("the map commutes with every shift in range") {
    const BSetSpec spec = square_once();
    const BlockMap m = f_ell_map(spec, 1);

    const CommutationReport rep = verify_commutation(m, spec, 20, 200);
    CHECK(rep.ok);
    CHECK_FALSE(rep.witness);
    CHECK(rep.k_max == 20);
    CHECK(rep.half_width == 200);

    CHECK(verify_commutation(shift_power(5), spec, 10, 60).ok);
    CHECK(verify_commutation(shift_power(-4), spec, 10, 60).ok);
}

TEST_CASE("the finite order is confirmed and every lower power is refuted") {
    const BSetSpec spec = square_once();
    const BlockMap m = f_ell_map(spec, 1);

    const OrderReport rep = verify_order(m, spec, 3);
    CHECK(rep.ok);
    CHECK(rep.identity_at_order);
    CHECK(rep.unrefuted.empty());
    // default half-width 2*3*6 = 36; first differing positions scanning from
    // the left edge of the shrinking window
    const std::vector<std::pair<long, Int>> expected_refutations = {{1, -33}, {2, -27}};
    CHECK(rep.refuted == expected_refutations);
    CHECK(rep.overlap_lo == -36);
    CHECK(rep.overlap_hi == 20);

    SUBCASE("claiming a too-small order fails") {
        const OrderReport one = verify_order(m, spec, 1);
        CHECK_FALSE(one.ok);
        CHECK_FALSE(one.identity_at_order);
        CHECK(one.order_mismatch_pos == -9);

        const OrderReport two = verify_order(m, spec, 2);
        CHECK_FALSE(two.ok);
        CHECK_FALSE(two.identity_at_order);
        CHECK(two.refuted == std::vector<std::pair<long, Int>>{{1, -15}});
    }

    SUBCASE("a corrupted read-ahead no longer has order three") {
        BlockMap bad = m;
        bad.q = m.q + 1;
        const OrderReport rep3 = verify_order(bad, spec, 3);
        CHECK_FALSE(rep3.ok);
        CHECK_FALSE(rep3.identity_at_order);
        CHECK(rep3.order_mismatch_pos == -42);
    }

    SUBCASE("the zero shift is the identity") {
        const OrderReport id = verify_order(shift_power(0), spec, 1, 10);
        CHECK(id.ok);
    }
}

TEST_CASE("the image of eta is the coding of a single-coordinate rotation") {
    const BSetSpec spec = square_once();

    const RotationReport rep = verify_rotation(spec, 1, 50);
    CHECK(rep.ok);
    CHECK(rep.certified);
    CHECK_FALSE(rep.mismatch);
    CHECK(rep.rotation_modulus == 9);
    CHECK(rep.rotation_residue == 6);
    CHECK(rep.window_lo == -50);
    CHECK(rep.window_hi == 51);

    SUBCASE("the coding of the zero point is eta itself") {
        BResidues zero;
        const PhiCodeResult code = phi_code(spec, zero, -30, 30);
        REQUIRE(code.certified);
        const BitWindow eta = eta_segment(spec, -30, 30);
        CHECK(code.window.bits == eta.bits);
    }

    SUBCASE("a wrong rotation coordinate is detected") {
        const BlockMap m = f_ell_map(spec, 1);
        const PhasedWindow f_eta =
            apply_block_map(m, phased_eta(spec, 0, -50, 50 + m.q + 1, m.p_ell));
        BResidues off;
        off.overrides.emplace_back(9, 3);  // the true coordinate is 6
        const PhiCodeResult code = phi_code(spec, off, -50, 51);
        REQUIRE(code.certified);
        Int first_diff = 0;
        bool found = false;
        for (Int s = -50; s <= 50 && !found; ++s)
            if (f_eta.window.at(s) != code.window.at(s)) {
                found = true;
                first_diff = s;
            }
        CHECK(found);
        CHECK(first_diff == -39);
    }
}

TEST_CASE("the mapped block is a plain shifted block of eta") {
    const BSetSpec spec = square_once();

    const WindowShiftReport rep = verify_window_shift(spec, 1, 7, 3);
    CHECK(rep.ok);
    CHECK(rep.z == 1680);
    CHECK_FALSE(rep.mismatch);
    // z solves both congruences that pin the map down at level 3
    CHECK(rep.z % (2520 / 3) == 0);
    CHECK(mod_floor(rep.z, 18) == 6);

    const WindowShiftReport small = verify_window_shift(spec, 1, 1, 1);
    CHECK(small.ok);
    CHECK(small.z == 6);

    CHECK_THROWS_AS(verify_window_shift(spec, 1, 9, 3), std::invalid_argument);  // 2^3 <= 9
    CHECK_THROWS_AS(verify_window_shift(spec, 1, 1, 0), std::invalid_argument);  // t < ell
}

TEST_CASE("coexisting finite orders in the fully squared family") {
    const BSetSpec spec = square_all();
    const std::vector<std::pair<long, long>> levels = {{1, 3}, {2, 5}, {3, 7}};
    for (const auto& [ell, order] : levels) {
        CAPTURE(ell);
        const BlockMap m = f_ell_map(spec, ell);
        CHECK(m.c_ell == order);
        const OrderReport rep = verify_order(m, spec, order);
        CHECK(rep.ok);
        CHECK(rep.identity_at_order);
        CHECK(rep.refuted.size() == static_cast<std::size_t>(order - 1));
        CHECK(rep.unrefuted.empty());
    }
}
