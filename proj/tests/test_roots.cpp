#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "ssid/roots.hpp"

using namespace ssid;

namespace {

// Independent oracle: roots with multiplicity by scanning the field.
std::vector<Fq> brute_roots(const Field& F, const UniPoly& f) { return poly_roots_bruteforce(F, f); }

UniPoly monic_cubic(const Field& F, const Fq& a2, const Fq& a1, const Fq& a0) {
    return poly_from(F, {a0, a1, a2, F.one()});
}

} // namespace

TEST_CASE("sylow context construction") {
    Field F7(7);
    SylowContext c2 = make_sylow_context(F7, 2, F7.elt(3));
    CHECK(c2.e == 1);
    CHECK(c2.s == 2);
    CHECK(c2.gamma == F7.elt(6)); // 3^3 = 27 = 6

    SylowContext c3 = make_sylow_context(F7, 3, F7.elt(2));
    CHECK(c3.e == 1);
    CHECK(c3.s == 3);
    CHECK(c3.gamma == F7.elt(4)); // 2^2

    Field F49(7, 3);
    Fq t = F49.elt(0, 1);
    // t is a square in F_49: t^24 = 3^12 = 1, so it must be rejected.
    CHECK(F49.pow(t, 24) == F49.one());
    CHECK_THROWS_MATCHES(make_sylow_context(F49, 2, t), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::NotANonResidue;
                         }));
    // 1 + t is a genuine non-square: (1+t)^24 = norm(1+t)^3 = 5^3 = -1.
    Fq w = F49.elt(1, 1);
    CHECK(F49.pow(w, 24) == F49.elt(6));
    SylowContext c49 = make_sylow_context(F49, 2, w);
    CHECK(c49.e == 4);
    CHECK(c49.s == 16);
    CHECK(c49.gamma == F49.pow(w, 3));
    CHECK(F49.pow(c49.gamma, 8) != F49.one());
    CHECK(F49.pow(c49.gamma, 16) == F49.one());
}

TEST_CASE("sylow discrete logarithms") {
    Field F7(7);
    SylowContext c2 = make_sylow_context(F7, 2, F7.elt(3));
    CHECK(sylow_dlog(F7, c2, F7.one()) == 0);
    CHECK(sylow_dlog(F7, c2, F7.elt(6)) == 1);

    Field F49(7, 3);
    SylowContext ctx = make_sylow_context(F49, 2, F49.elt(1, 1));
    for (int x : {0, 1, 5, 13, 15}) {
        CHECK(sylow_dlog(F49, ctx, F49.pow(ctx.gamma, x)) == x);
    }
    CHECK_THROWS_MATCHES(sylow_dlog(F49, ctx, F49.elt(1, 1)), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::NotInSubgroup;
                         }));
}

TEST_CASE("square roots") {
    Field F7(7);
    SylowContext c2 = make_sylow_context(F7, 2, F7.elt(3));
    auto r = sqrt_with(F7, c2, F7.elt(2));
    REQUIRE(r);
    CHECK(*r == F7.elt(3)); // roots 3 and 4; 3 is canonical
    CHECK_FALSE(sqrt_with(F7, c2, F7.elt(3)));
    CHECK(sqrt_with(F7, c2, F7.zero()) == F7.zero());

    Field F49(7, 3);
    SylowContext c2e = make_sylow_context(F49, 2, F49.elt(1, 1));
    auto rt = sqrt_with(F49, c2e, F49.elt(3));
    REQUIRE(rt);
    CHECK(*rt == F49.elt(0, 1)); // t^2 = 3; t = (0,1) beats -t = (0,6)

    // Round-trip on random squares, and absence exactly on non-residues.
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        Fq x = F49.random_nonzero(rng);
        auto s = sqrt_with(F49, c2e, x);
        if (F49.is_rth_residue(x, 2)) {
            REQUIRE(s);
            CHECK(F49.mul(*s, *s) == x);
        } else {
            CHECK_FALSE(s);
        }
    }
}

TEST_CASE("cube roots") {
    Field F7(7);
    SylowContext c3 = make_sylow_context(F7, 3, F7.elt(2));
    auto r = rth_root_with(F7, c3, F7.elt(6));
    REQUIRE(r);
    CHECK(*r == F7.elt(3)); // cube roots of 6 are {3,5,6}
    auto r1 = rth_root_with(F7, c3, F7.one());
    REQUIRE(r1);
    CHECK(*r1 == F7.one()); // roots {1,2,4}

    Field F49(7, 3);
    Rng rng(4);
    SylowContext c3e = make_sylow_context(F49, 3, F49.find_nonresidue(3, rng));
    CHECK_FALSE(rth_root_with(F49, c3e, F49.elt(2))); // 2^16 != 1 in F_49

    for (int i = 0; i < 300; ++i) {
        Fq x = F49.random_nonzero(rng);
        Fq cube = F49.mul(F49.mul(x, x), x);
        auto c = rth_root_with(F49, c3e, cube);
        REQUIRE(c);
        CHECK(F49.mul(F49.mul(*c, *c), *c) == cube);
    }
}

TEST_CASE("unique cube roots when 3 does not divide q-1") {
    Field F11(11); // 11 = 2 mod 3
    for (int v = 0; v < 11; ++v) {
        auto c = cbrt_any(F11, nullptr, F11.elt(v));
        REQUIRE(c);
        CHECK(F11.pow(*c, 3) == F11.elt(v));
    }
}

TEST_CASE("quadratic solving") {
    Field F7(7);
    SylowContext c2 = make_sylow_context(F7, 2, F7.elt(3));
    // X^2 - 3X + 2 = (X-1)(X-2)
    CHECK(solve_quadratic(F7, c2, F7.elt(-3), F7.elt(2)) ==
          std::vector<Fq>{F7.elt(1), F7.elt(2)});
    // X^2 - 3: 3 is a non-square mod 7
    CHECK(solve_quadratic(F7, c2, F7.zero(), F7.elt(-3)).empty());
    // X^2 - 2X + 1 = (X-1)^2
    CHECK(solve_quadratic(F7, c2, F7.elt(-2), F7.elt(1)) ==
          std::vector<Fq>{F7.elt(1), F7.elt(1)});
}

TEST_CASE("cubic solving: pinned cases") {
    Field F7(7);
    SylowContext c2 = make_sylow_context(F7, 2, F7.elt(3));
    SylowContext c3 = make_sylow_context(F7, 3, F7.elt(2));
    // X^3 - 1: the cube roots of unity in F_7
    CHECK(solve_cubic(F7, c2, &c3, F7.zero(), F7.zero(), F7.elt(-1)) ==
          std::vector<Fq>{F7.elt(1), F7.elt(2), F7.elt(4)});
    // X^3 - 2 has no roots over F_7 or F_49
    CHECK(solve_cubic(F7, c2, &c3, F7.zero(), F7.zero(), F7.elt(-2)).empty());

    Field F49(7, 3);
    Rng rng(5);
    SylowContext e2 = make_sylow_context(F49, 2, F49.elt(1, 1));
    SylowContext e3 = make_sylow_context(F49, 3, F49.find_nonresidue(3, rng));
    CHECK(solve_cubic(F49, e2, &e3, F49.zero(), F49.zero(), F49.elt(-2)).empty());

    // Phi_2(0, X) = (X - 54000)^3 = (X - 1)^3 mod 11
    Field F11(11);
    SylowContext b2 = make_sylow_context(F11, 2, F11.elt(2));
    auto triple = solve_cubic(F11, b2, nullptr, F11.elt(-3), F11.elt(3), F11.elt(-1));
    CHECK(triple == std::vector<Fq>{F11.elt(1), F11.elt(1), F11.elt(1)});
}

TEST_CASE("cubic and quadratic solving agrees with brute force") {
    SECTION("exhaustive over F_7") {
        Field F(7);
        SylowContext c2 = make_sylow_context(F, 2, F.elt(3));
        SylowContext c3 = make_sylow_context(F, 3, F.elt(2));
        for (int a2 = 0; a2 < 7; ++a2)
            for (int a1 = 0; a1 < 7; ++a1)
                for (int a0 = 0; a0 < 7; ++a0) {
                    auto got = solve_cubic(F, c2, &c3, F.elt(a2), F.elt(a1), F.elt(a0));
                    auto want = brute_roots(F, monic_cubic(F, F.elt(a2), F.elt(a1), F.elt(a0)));
                    CHECK(got == want);
                    auto got2 = solve_quadratic(F, c2, F.elt(a1), F.elt(a0));
                    auto want2 = brute_roots(F, poly_from(F, {F.elt(a0), F.elt(a1), F.one()}));
                    CHECK(got2 == want2);
                }
    }
    SECTION("exhaustive over F_25") {
        Field F(5, 2); // 2 is a non-square mod 5
        Rng rng(8);
        SylowContext c2 = make_sylow_context(F, 2, F.find_nonresidue(2, rng));
        SylowContext c3 = make_sylow_context(F, 3, F.find_nonresidue(3, rng));
        for (Integer i = 0; i < 25; ++i)
            for (Integer j = 0; j < 25; ++j)
                for (Integer k = 0; k < 25; ++k) {
                    Fq a2 = F.elt_at(i), a1 = F.elt_at(j), a0 = F.elt_at(k);
                    auto got = solve_cubic(F, c2, &c3, a2, a1, a0);
                    auto want = brute_roots(F, monic_cubic(F, a2, a1, a0));
                    CHECK(got == want);
                }
    }
    SECTION("random over larger fields") {
        for (const Field& F : {Field(11, 7), Field(13, 2), Field(101), Field(103, 5)}) {
            Rng rng(17);
            SylowContext c2 = make_sylow_context(F, 2, F.find_nonresidue(2, rng));
            bool has3 = (F.q() - 1) % 3 == 0;
            std::optional<SylowContext> c3;
            if (has3) c3 = make_sylow_context(F, 3, F.find_nonresidue(3, rng));
            for (int i = 0; i < 250; ++i) {
                Fq a2 = F.random_element(rng), a1 = F.random_element(rng),
                   a0 = F.random_element(rng);
                auto got = solve_cubic(F, c2, c3 ? &*c3 : nullptr, a2, a1, a0);
                auto want = brute_roots(F, monic_cubic(F, a2, a1, a0));
                CHECK(got == want);
            }
        }
    }
}
