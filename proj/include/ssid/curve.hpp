#pragma once

// Short Weierstrass curves y^2 = x^3 + Ax + B over F_p or F_p(t), with the
// chord-tangent group law in affine coordinates.  Nothing here needs to be
// fast at cryptographic sizes: the scalar multiplications drive the Monte
// Carlo test, whose cost is one or two multiples per repetition.

#include <optional>
#include <string>

#include "ssid/field.hpp"
#include "ssid/roots.hpp"

namespace ssid {

struct Curve {
    Field F;
    Fq A;
    Fq B;
};

struct Point {
    bool inf = true;
    Fq x{};
    Fq y{};

    static Point infinity() { return Point{}; }
    static Point affine(Fq px, Fq py) { return Point{false, std::move(px), std::move(py)}; }

    bool operator==(const Point& o) const {
        if (inf || o.inf) return inf == o.inf;
        return x == o.x && y == o.y;
    }
};

// 4A^3 + 27B^2
inline Fq curve_discriminant_term(const Curve& E) {
    const Field& F = E.F;
    Fq a3 = F.mul(F.mul(E.A, E.A), E.A);
    Fq b2 = F.mul(E.B, E.B);
    return F.add(F.mul_small(a3, 4), F.mul_small(b2, 27));
}

inline Curve make_curve(const Field& F, const Fq& A, const Fq& B) {
    Curve E{F, A, B};
    if (F.is_zero(curve_discriminant_term(E)))
        fail(Errc::SingularCurve, "4A^3 + 27B^2 = 0");
    return E;
}

// j = 1728 * 4A^3 / (4A^3 + 27B^2)
inline Fq j_invariant(const Curve& E) {
    const Field& F = E.F;
    Fq denom = curve_discriminant_term(E);
    if (F.is_zero(denom)) fail(Errc::SingularCurve, "singular curve has no j-invariant");
    Fq a3_4 = F.mul_small(F.mul(F.mul(E.A, E.A), E.A), 4);
    return F.mul(F.mul_small(a3_4, 1728), F.inv(denom));
}

// A representative curve with the requested j-invariant:
// j = 0 -> (0, 1); j = 1728 -> (1, 0); otherwise k = j/(1728 - j), (3k, 2k).
inline Curve curve_from_j(const Field& F, const Fq& j) {
    if (F.is_zero(j)) return make_curve(F, F.zero(), F.one());
    Fq j1728 = F.elt(1728);
    if (j == j1728) return make_curve(F, F.one(), F.zero());
    Fq k = F.div(j, F.sub(j1728, j));
    return make_curve(F, F.mul_small(k, 3), F.mul_small(k, 2));
}

inline bool on_curve(const Curve& E, const Point& P) {
    if (P.inf) return true;
    const Field& F = E.F;
    Fq lhs = F.mul(P.y, P.y);
    Fq rhs = F.add(F.add(F.mul(F.mul(P.x, P.x), P.x), F.mul(E.A, P.x)), E.B);
    return lhs == rhs;
}

inline Point negate(const Curve& E, const Point& P) {
    if (P.inf) return P;
    return Point::affine(P.x, E.F.neg(P.y));
}

namespace detail {

inline Point add_unchecked(const Curve& E, const Point& P, const Point& Q) {
    const Field& F = E.F;
    if (P.inf) return Q;
    if (Q.inf) return P;
    if (P.x == Q.x) {
        if (P.y != Q.y || F.is_zero(P.y)) return Point::infinity();
        // Tangent: lambda = (3x^2 + A) / (2y)
        Fq num = F.add(F.mul_small(F.mul(P.x, P.x), 3), E.A);
        Fq lambda = F.div(num, F.mul_small(P.y, 2));
        Fq x3 = F.sub(F.mul(lambda, lambda), F.mul_small(P.x, 2));
        Fq y3 = F.sub(F.mul(lambda, F.sub(P.x, x3)), P.y);
        return Point::affine(x3, y3);
    }
    Fq lambda = F.div(F.sub(Q.y, P.y), F.sub(Q.x, P.x));
    Fq x3 = F.sub(F.sub(F.mul(lambda, lambda), P.x), Q.x);
    Fq y3 = F.sub(F.mul(lambda, F.sub(P.x, x3)), P.y);
    return Point::affine(x3, y3);
}

} // namespace detail

inline Point add(const Curve& E, const Point& P, const Point& Q) {
    if (!on_curve(E, P) || !on_curve(E, Q))
        fail(Errc::PointsOnDifferentCurves, "operand point does not satisfy the curve equation");
    return detail::add_unchecked(E, P, Q);
}

// k*P by double-and-add; negative k via negation, 0*P = infinity.
inline Point scalar_mul(const Curve& E, const Integer& k, const Point& P) {
    if (!on_curve(E, P))
        fail(Errc::PointsOnDifferentCurves, "point does not satisfy the curve equation");
    if (P.inf || k == 0) return Point::infinity();
    Integer e = k;
    Point base = P;
    if (e < 0) {
        e = -e;
        base = negate(E, P);
    }
    Point acc = Point::infinity();
    size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = nbits; i-- > 0;) {
        acc = detail::add_unchecked(E, acc, acc);
        if (mpz_tstbit(e.get_mpz_t(), i)) acc = detail::add_unchecked(E, acc, base);
    }
    return acc;
}

// Uniformly sampled abscissa, retried until x^3 + Ax + B is a square; the
// sign of y is one random bit.  Never returns the point at infinity.
inline Point random_point(const Curve& E, Rng& rng) {
    const Field& F = E.F;
    SylowContext ctx2 = make_sylow_context(F, 2, F.find_nonresidue(2, rng));
    while (true) {
        Fq x = F.random_element(rng);
        Fq rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(E.A, x)), E.B);
        if (F.is_zero(rhs)) {
            rng.bit(); // keep the bit stream aligned with the 2-root case
            return Point::affine(x, F.zero());
        }
        auto y = sqrt_with(F, ctx2, rhs);
        if (!y) continue;
        bool flip = rng.bit();
        return Point::affine(x, flip ? F.neg(*y) : *y);
    }
}

// Exhaustive point count; q must be desk-scale (builds a table of squares).
inline Integer count_points_bruteforce(const Curve& E) {
    const Field& F = E.F;
    if (F.q() > 4000000)
        fail(Errc::FieldTooLarge, "exhaustive point counting is limited to small q");
    unsigned long q = F.q().get_ui();
    const Integer& p = F.p();
    auto index_of = [&](const Fq& x) {
        Integer i = F.degree() == 1 ? x.c0 : x.c0 * p + x.c1;
        return i.get_ui();
    };
    std::vector<char> is_square(q, 0);
    for (unsigned long y = 0; y < q; ++y) {
        Fq v = F.elt_at(y);
        is_square[index_of(F.mul(v, v))] = 1;
    }
    Integer total = 1; // infinity
    for (unsigned long i = 0; i < q; ++i) {
        Fq x = F.elt_at(i);
        Fq rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(E.A, x)), E.B);
        if (F.is_zero(rhs))
            total += 1;
        else if (is_square[index_of(rhs)])
            total += 2;
    }
    return total;
}

inline std::string curve_to_string(const Curve& E) {
    return E.F.to_string() + " " + E.F.to_string(E.A) + " " + E.F.to_string(E.B);
}

inline Curve parse_curve(const std::string& s) {
    auto sp1 = s.find(' ');
    auto sp2 = s.find(' ', sp1 == std::string::npos ? s.size() : sp1 + 1);
    if (sp1 == std::string::npos || sp2 == std::string::npos)
        fail(Errc::ParseError, "curve syntax is \"p[;alpha] A B\"");
    Field F = Field::parse(s.substr(0, sp1));
    Fq A = F.parse_element(s.substr(sp1 + 1, sp2 - sp1 - 1));
    Fq B = F.parse_element(s.substr(sp2 + 1));
    return make_curve(F, A, B);
}

} // namespace ssid
