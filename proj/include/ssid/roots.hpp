#pragma once

// r-th roots in F_q by exponentiation plus a discrete log in the r-Sylow
// subgroup of F_q^*: Tonelli-Shanks for r = 2, the Adleman-Manders-Miller
// generalization for r = 3.  On top of that, quadratic and cubic equation
// solving by radicals (quadratic formula, Cardano), returning complete root
// multisets in canonical order.
//
// The discrete log is the naive digit-by-digit method: the 2- and 3-Sylow
// subgroups of a random F_q^* are tiny, so the O(e^2) group-operation count
// is negligible against the surrounding exponentiations.

#include <optional>
#include <vector>

#include "ssid/field.hpp"
#include "ssid/unipoly.hpp"

namespace ssid {

struct SylowContext {
    unsigned long r = 0; // 2 or 3
    unsigned e = 0;      // nu_r(q - 1)
    Integer s;           // r^e
    Fq gamma;            // generator of the r-Sylow subgroup of F_q^*
};

// gamma = nonresidue^((q-1)/s) with s = r^nu_r(q-1).
inline SylowContext make_sylow_context(const Field& F, unsigned long r, const Fq& nonresidue) {
    Integer qm1 = F.q() - 1;
    if (qm1 % r != 0)
        fail(Errc::RNotDividingGroupOrder, "r does not divide q-1");
    SylowContext ctx;
    ctx.r = r;
    ctx.s = 1;
    Integer u = qm1;
    while (u % r == 0) {
        u /= r;
        ctx.s *= r;
        ++ctx.e;
    }
    ctx.gamma = F.pow(nonresidue, u);
    if (F.pow(ctx.gamma, ctx.s / r) == F.one())
        fail(Errc::NotANonResidue, "element is an r-th power residue");
    return ctx;
}

// x in [0, s) with gamma^x = h, provided h^s = 1.  Digits of x base r are
// recovered one at a time (Pohlig-Hellman style).
inline Integer sylow_dlog(const Field& F, const SylowContext& ctx, const Fq& h) {
    if (F.pow(h, ctx.s) != F.one())
        fail(Errc::NotInSubgroup, "element is outside the r-Sylow subgroup");
    // omega = gamma^(s/r) has order exactly r; table of its powers.
    Fq omega = F.pow(ctx.gamma, ctx.s / ctx.r);
    std::vector<Fq> table(ctx.r);
    table[0] = F.one();
    for (unsigned long i = 1; i < ctx.r; ++i) table[i] = F.mul(table[i - 1], omega);

    Integer x = 0;
    Integer r_pow = 1; // r^i
    Fq gamma_inv = F.inv(ctx.gamma);
    Fq cur = h;
    for (unsigned i = 0; i < ctx.e; ++i) {
        Integer shift = ctx.s / (r_pow * ctx.r); // s / r^(i+1)
        Fq probe = F.pow(cur, shift);
        unsigned long digit = ctx.r;
        for (unsigned long d = 0; d < ctx.r; ++d)
            if (probe == table[d]) { digit = d; break; }
        if (digit == ctx.r)
            fail(Errc::NotInSubgroup, "discrete log digit not found");
        if (digit != 0) {
            x += r_pow * digit;
            cur = F.mul(cur, F.pow(gamma_inv, r_pow * digit));
        }
        r_pow *= ctx.r;
    }
    return x;
}

// r-th root of x using ctx (r = ctx.r), or nullopt when x is a non-residue.
// Returns the canonically smallest root.
inline std::optional<Fq> rth_root_with(const Field& F, const SylowContext& ctx, const Fq& x) {
    if (F.is_zero(x)) return F.zero();
    Integer u = (F.q() - 1) / ctx.s; // the prime-to-r part
    Fq h = F.pow(x, u);
    Integer a = sylow_dlog(F, ctx, h); // x^u = gamma^a
    if (a % ctx.r != 0) return std::nullopt;

    // Solve y = x^b * gamma^(-a/r * k) with r*b = 1 + k*u.
    Integer b, k;
    if (u == 1) {
        b = 0;
        k = -1;
    } else {
        if (mpz_invert(b.get_mpz_t(), Integer(ctx.r).get_mpz_t(), u.get_mpz_t()) == 0)
            fail(Errc::InvariantViolation, "r not invertible mod u");
        k = (Integer(ctx.r) * b - 1) / u;
    }
    Integer gexp = (-(a / ctx.r) * k) % ctx.s;
    if (gexp < 0) gexp += ctx.s;
    Fq y = F.mul(F.pow(x, b), F.pow(ctx.gamma, gexp));
    if (F.pow(y, ctx.r) != x)
        fail(Errc::InvariantViolation, "radical verification failed");

    // Pick the smallest among the r roots y * omega^i.
    Fq best = y;
    if (ctx.e > 0) {
        Fq omega = F.pow(ctx.gamma, ctx.s / ctx.r);
        Fq cur = y;
        for (unsigned long i = 1; i < ctx.r; ++i) {
            cur = F.mul(cur, omega);
            if (cur < best) best = cur;
        }
    }
    return best;
}

inline std::optional<Fq> sqrt_with(const Field& F, const SylowContext& ctx2, const Fq& x) {
    return rth_root_with(F, ctx2, x);
}

// Cube root valid in every odd-characteristic field: when 3 | q-1 it needs a
// 3-Sylow context, otherwise cubing is a bijection and the root is a single
// exponentiation.
inline std::optional<Fq> cbrt_any(const Field& F, const SylowContext* ctx3, const Fq& x) {
    Integer qm1 = F.q() - 1;
    if (qm1 % 3 == 0) {
        if (ctx3 == nullptr)
            fail(Errc::MissingNonResidue, "cube roots over this field need a 3-Sylow context");
        return rth_root_with(F, *ctx3, x);
    }
    if (F.is_zero(x)) return F.zero();
    Integer d;
    mpz_invert(d.get_mpz_t(), Integer(3).get_mpz_t(), qm1.get_mpz_t());
    return F.pow(x, d);
}

// Root multiset of X^2 + bX + c, canonically sorted: {}, {r, r} or {r1, r2}.
inline std::vector<Fq> solve_quadratic(const Field& F, const SylowContext& ctx2,
                                       const Fq& b, const Fq& c) {
    Fq disc = F.sub(F.mul(b, b), F.mul_small(c, 4));
    Fq half = F.inv(F.elt(2));
    if (F.is_zero(disc)) {
        Fq r = F.mul(F.neg(b), half);
        return {r, r};
    }
    auto w = sqrt_with(F, ctx2, disc);
    if (!w) return {};
    Fq r1 = F.mul(F.sub(*w, b), half);
    Fq r2 = F.mul(F.sub(F.neg(*w), b), half);
    if (r2 < r1) std::swap(r1, r2);
    return {r1, r2};
}

namespace detail {

// One F_q-rational root of f, or nullopt.  g = gcd(f, X^q - X) is the
// product of the distinct rational roots; if it is not already linear it is
// cut down with quadratic-character gcds of shifted arguments, sweeping the
// shift c upward so the whole procedure is deterministic.
inline std::optional<Fq> any_rational_root(const Field& F, const UniPoly& f) {
    UniPoly xq = poly_xq_mod(F, f);
    UniPoly g = poly_gcd(F, f, poly_sub(F, xq, poly_x(F)));
    if (g.degree() == 0) return std::nullopt;
    Integer half = (F.q() - 1) / 2;
    // elt_at sweeps all of F_q: prime-field shifts alone cannot separate
    // Frobenius-conjugate roots, whose quadratic characters always agree.
    for (Integer c = 0; g.degree() > 1 && c < F.q(); ++c) {
        Fq shift = F.elt_at(c);
        if (F.is_zero(poly_eval(F, g, F.neg(shift)))) return F.neg(shift);
        UniPoly base = poly_from(F, {shift, F.one()}); // X + c
        UniPoly h = poly_powmod(F, base, half, g);
        for (int sign : {+1, -1}) {
            UniPoly hs = poly_add(F, h, poly_const(F, sign > 0 ? F.neg(F.one()) : F.one()));
            UniPoly d = poly_gcd(F, g, hs);
            if (d.degree() > 0 && d.degree() < g.degree()) {
                g = d;
                break;
            }
        }
    }
    if (g.degree() != 1)
        fail(Errc::InvariantViolation, "character splitting failed to isolate a root");
    return F.neg(g.c[0]); // monic X + g0
}

} // namespace detail

// Complete rational root multiset of an arbitrary polynomial: strip the
// distinct roots out of gcd(f, X^q - X) one at a time, then recover
// multiplicities by repeated division.  Exponential-free alternative to a
// field scan for the small-degree polynomials the graph builder meets.
inline std::vector<Fq> poly_rational_roots(const Field& F, const UniPoly& f) {
    std::vector<Fq> roots;
    if (f.degree() < 1) return roots;
    UniPoly xq = poly_xq_mod(F, f);
    UniPoly g = poly_gcd(F, f, poly_sub(F, xq, poly_x(F)));
    UniPoly rest = f;
    while (g.degree() > 0) {
        auto r = detail::any_rational_root(F, g);
        if (!r) fail(Errc::InvariantViolation, "split part of f lost its roots");
        auto [gq, grem] = poly_div_linear(F, g, *r);
        if (!F.is_zero(grem))
            fail(Errc::InvariantViolation, "claimed root does not divide the split part");
        g = gq;
        while (true) {
            auto [fq, frem] = poly_div_linear(F, rest, *r);
            if (!F.is_zero(frem)) break;
            roots.push_back(*r);
            rest = fq;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Root multiset of the monic cubic X^3 + a2 X^2 + a1 X + a0 over F_q,
// canonically sorted, multiplicities included (0 to 3 entries).
//
// Strategy: find one root by radicals (Cardano on the depressed cubic, with
// a gcd fallback when the resolvent discriminant is a non-square), verify it
// by evaluation, divide it out and finish with the quadratic formula.  ctx3
// may be null when 3 does not divide q-1 (cube roots are then unique).
inline std::vector<Fq> solve_cubic(const Field& F, const SylowContext& ctx2,
                                   const SylowContext* ctx3, const Fq& a2, const Fq& a1,
                                   const Fq& a0) {
    UniPoly f = poly_from(F, {a0, a1, a2, F.one()});

    // Depress: X = Y - a2/3 gives Y^3 + P Y + Q.
    Fq third = F.inv(F.elt(3));
    Fq shift = F.mul(a2, third); // subtract from y-roots to get x-roots
    Fq a2sq = F.mul(a2, a2);
    Fq P = F.sub(a1, F.mul(a2sq, third));
    Fq Q = F.add(F.sub(a0, F.mul(F.mul(a1, a2), third)),
                 F.mul_small(F.mul(F.mul(a2sq, a2), F.inv(F.elt(27))), 2));

    std::optional<Fq> x0;
    if (F.is_zero(P)) {
        // Y^3 = -Q
        auto y0 = cbrt_any(F, ctx3, F.neg(Q));
        if (y0) x0 = F.sub(*y0, shift);
    } else {
        // Resolvent Z^2 + QZ - P^3/27: roots are the cubes of Cardano's u.
        Fq p3 = F.mul(F.mul(F.mul(P, P), P), F.inv(F.elt(27)));
        Fq disc = F.add(F.mul(Q, Q), F.mul_small(p3, 4));
        if (F.is_zero(disc)) {
            // Double root at a = -3Q/(2P) (no radicals needed).
            Fq a = F.neg(F.div(F.mul_small(Q, 3), F.mul_small(P, 2)));
            Fq r1 = F.sub(a, shift);
            Fq r2 = F.sub(F.neg(F.mul_small(a, 2)), shift);
            std::vector<Fq> roots{r1, r1, r2};
            std::sort(roots.begin(), roots.end());
            return roots;
        }
        auto w = sqrt_with(F, ctx2, disc);
        if (!w) {
            // The Cardano radical lives outside F_q.  When 3 | q-1 the cubic
            // has exactly one rational root; when 3 does not divide q-1 it
            // may still split.  Either way one root suffices here, since the
            // quotient quadratic recovers the rest.
            auto r = detail::any_rational_root(F, f);
            if (!r) return {};
            x0 = *r;
        } else {
            Fq half = F.inv(F.elt(2));
            Fq z = F.mul(F.add(F.neg(Q), *w), half);
            if (F.is_zero(z)) z = F.mul(F.sub(F.neg(Q), *w), half);
            auto u = cbrt_any(F, ctx3, z);
            if (!u) return {}; // z a non-cube: the cubic is irreducible
            Fq y0 = F.sub(*u, F.div(P, F.mul_small(*u, 3)));
            x0 = F.sub(y0, shift);
        }
    }

    if (!x0) return {};
    if (!F.is_zero(poly_eval(F, f, *x0))) {
        // A radical step misfired; fall back to the gcd route so a wrong
        // root can never be reported.
        auto r = detail::any_rational_root(F, f);
        if (!r) return {};
        x0 = *r;
        if (!F.is_zero(poly_eval(F, f, *x0))) return {};
    }

    auto [quo, rem] = poly_div_linear(F, f, *x0);
    if (!F.is_zero(rem))
        fail(Errc::InvariantViolation, "cubic division by verified root left a remainder");
    // quo is monic X^2 + bX + c (possibly with zero coefficients trimmed).
    Fq b = quo.degree() >= 1 ? quo.c[1] : F.zero();
    Fq c = quo.degree() >= 0 ? quo.c[0] : F.zero();
    std::vector<Fq> roots = solve_quadratic(F, ctx2, b, c);
    roots.push_back(*x0);
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace ssid
