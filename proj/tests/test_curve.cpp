#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "ssid/curve.hpp"

using namespace ssid;

TEST_CASE("j-invariants") {
    Field F7{Integer(7)};
    CHECK(j_invariant(make_curve(F7, F7.one(), F7.zero())) == F7.elt(1728));
    CHECK(j_invariant(make_curve(F7, F7.zero(), F7.one())) == F7.zero());
    CHECK(j_invariant(make_curve(F7, F7.one(), F7.one())) == F7.one());

    Field F13{Integer(13)};
    CHECK(j_invariant(make_curve(F13, F13.one(), F13.zero())) == F13.elt(1728 % 13));
    CHECK_THROWS_MATCHES(make_curve(F7, F7.zero(), F7.zero()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::SingularCurve;
                         }));
}

TEST_CASE("curve_from_j round-trips") {
    Field F13{Integer(13)};
    Curve E = curve_from_j(F13, F13.elt(5));
    CHECK(j_invariant(E) == F13.elt(5));

    for (unsigned long p : {5ul, 7ul, 13ul, 199ul}) {
        Field F{Integer(p)};
        for (unsigned long j = 0; j < p; ++j)
            CHECK(j_invariant(curve_from_j(F, F.elt(j))) == F.elt(j));
    }
    Field F49(7, 3);
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        Fq j = F49.random_element(rng);
        CHECK(j_invariant(curve_from_j(F49, j)) == j);
    }
}

TEST_CASE("group law basics") {
    Field F11{Integer(11)};
    Curve E = make_curve(F11, F11.one(), F11.zero()); // y^2 = x^3 + x
    Point O = Point::infinity();
    Point T = Point::affine(F11.zero(), F11.zero()); // 2-torsion

    CHECK(add(E, T, O) == T);
    CHECK(add(E, T, T) == O);
    CHECK(add(E, T, negate(E, T)) == O);

    // order 12 = p + 1: every point is killed by p+1
    for (unsigned long x = 0; x < 11; ++x) {
        Fq rhs = F11.add(F11.mul(F11.mul(F11.elt(x), F11.elt(x)), F11.elt(x)), F11.elt(x));
        for (unsigned long y = 0; y < 11; ++y) {
            if (F11.mul(F11.elt(y), F11.elt(y)) != rhs) continue;
            Point P = Point::affine(F11.elt(x), F11.elt(y));
            CHECK(scalar_mul(E, 12, P).inf);
        }
    }
    CHECK(count_points_bruteforce(E) == 12);

    CHECK_THROWS_MATCHES(add(E, Point::affine(F11.elt(1), F11.elt(1)), O), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::PointsOnDifferentCurves;
                         }));
}

TEST_CASE("scalar multiples against brute-force orders") {
    Field F7{Integer(7)};
    Curve E = make_curve(F7, F7.zero(), F7.elt(2)); // y^2 = x^3 + 2, 9 points
    CHECK(count_points_bruteforce(E) == 9);
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        Point P = random_point(E, rng);
        CHECK(scalar_mul(E, 9, P).inf);
        CHECK_FALSE(scalar_mul(E, 8, P).inf); // 8P = -P != O
        CHECK(scalar_mul(E, 0, P).inf);
        CHECK(scalar_mul(E, -3, P) == negate(E, scalar_mul(E, 3, P)));
    }
}

TEST_CASE("group axioms on random samples") {
    for (const Field& F : {Field{Integer(1009)}, Field(13, 2)}) {
        Rng rng(5);
        Curve E = [&] {
            while (true) {
                Fq A = F.random_element(rng), B = F.random_element(rng);
                Curve C{F, A, B};
                if (!F.is_zero(curve_discriminant_term(C))) return C;
            }
        }();
        for (int i = 0; i < 250; ++i) {
            Point P = random_point(E, rng);
            Point Q = random_point(E, rng);
            Point R = random_point(E, rng);
            CHECK(add(E, P, Q) == add(E, Q, P));
            CHECK(add(E, add(E, P, Q), R) == add(E, P, add(E, Q, R)));
            CHECK(add(E, P, negate(E, P)).inf);
            CHECK(add(E, P, Point::infinity()) == P);
            CHECK(on_curve(E, add(E, P, Q)));
        }
    }
}

TEST_CASE("order times point is the identity across small primes") {
    // every curve for p <= 13, a random sample of 40 for larger p
    std::vector<unsigned long> primes{5, 7, 11, 13, 53, 101, 151, 199};
    for (unsigned long p : primes) {
        Field F{Integer(p)};
        Rng rng(p);
        std::vector<std::pair<unsigned long, unsigned long>> coeffs;
        if (p <= 13) {
            for (unsigned long a = 0; a < p; ++a)
                for (unsigned long b = 0; b < p; ++b) coeffs.emplace_back(a, b);
        } else {
            for (int i = 0; i < 40; ++i)
                coeffs.emplace_back(rng.below(Integer(p)).get_ui(),
                                    rng.below(Integer(p)).get_ui());
        }
        for (auto [a, b] : coeffs) {
            Curve E{F, F.elt(a), F.elt(b)};
            if (F.is_zero(curve_discriminant_term(E))) continue;
            Integer N = count_points_bruteforce(E);
            int reps = p <= 13 ? 3 : 20;
            for (int i = 0; i < reps; ++i)
                CHECK(scalar_mul(E, N, random_point(E, rng)).inf);
        }
    }
}

TEST_CASE("random_point is on-curve, deterministic, and avoids bad abscissas") {
    Field F7{Integer(7)};
    Curve E = make_curve(F7, F7.zero(), F7.elt(2));

    // brute-force the abscissas with non-square x^3 + 2: {1, 2, 4}
    std::set<unsigned long> bad;
    for (unsigned long x = 0; x < 7; ++x) {
        Fq rhs = F7.add(F7.mul(F7.mul(F7.elt(x), F7.elt(x)), F7.elt(x)), F7.elt(2));
        if (F7.chi(rhs) == -1) bad.insert(x);
    }
    CHECK(bad == std::set<unsigned long>{1, 2, 4});

    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        Point P = random_point(E, rng);
        CHECK(on_curve(E, P));
        CHECK_FALSE(P.inf);
        CHECK_FALSE(bad.count(P.x.c0.get_ui()));
    }

    Rng r1(4), r2(4);
    CHECK(random_point(E, r1) == random_point(E, r2));

    Field F11{Integer(11)};
    Curve E11 = make_curve(F11, F11.one(), F11.zero());
    Rng rng2(1);
    Point P = random_point(E11, rng2);
    CHECK(on_curve(E11, P));
}

TEST_CASE("curve serialization") {
    Curve E = parse_curve("7;3 1,2 5");
    CHECK(E.F.degree() == 2);
    CHECK(E.A == E.F.elt(1, 2));
    CHECK(E.B == E.F.elt(5));
    CHECK(curve_to_string(E) == "7;3 1,2 5");

    Curve E2 = parse_curve("1009 1 0");
    CHECK(E2.F.degree() == 1);
    CHECK(curve_to_string(E2) == "1009 1 0");
    CHECK_THROWS_AS(parse_curve("garbage"), Error);
}
