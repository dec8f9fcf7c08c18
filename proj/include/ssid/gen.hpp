#pragma once

// Test-input generation: random primes, supersingular curves reached by a
// seeded random walk on the supersingular 2-isogeny component, and verified
// ordinary curves.  Supersingular generation needs p != 1 mod 12 so that
// j = 0 or j = 1728 provides a starting vertex by the congruence rule;
// constructing starting curves for the remaining primes would require CM
// machinery (Hilbert class polynomials) that this library does not carry.

#include <functional>

#include "ssid/classify.hpp"
#include "ssid/curve.hpp"

namespace ssid {

// Random prime with exactly `bits` bits satisfying `accept`.
inline Integer random_prime(Rng& rng, unsigned bits,
                            const std::function<bool(const Integer&)>& accept = nullptr) {
    if (bits < 3) fail(Errc::BadInput, "prime must have at least 3 bits");
    Integer lo = Integer(1) << (bits - 1);
    while (true) {
        Integer c = lo + rng.below(lo);
        mpz_nextprime(c.get_mpz_t(), c.get_mpz_t());
        if (mpz_sizeinbase(c.get_mpz_t(), 2) != bits) continue;
        if (!accept || accept(c)) return c;
    }
}

inline void require_walkable_prime(const Integer& p) {
    if (p % 12 == 1)
        fail(Errc::BadInput,
             "p = 1 mod 12: both j = 0 and j = 1728 are ordinary, and the CM "
             "construction of a starting supersingular curve is not implemented");
}

namespace detail {

inline Fq walk_start_vertex(const Field& F) {
    // j = 0 is supersingular iff p != 1 mod 3, j = 1728 iff p != 1 mod 4.
    if (F.p() % 3 != 1) return F.zero();
    return F.elt(1728);
}

} // namespace detail

// Supersingular curve over F_{p^2}: start at the congruence-rule vertex and
// take 2*ceil(log2 p) uniform non-backtracking steps on the supersingular
// component of the 2-isogeny graph.
inline Curve gen_supersingular_fp2(const Integer& p, Rng& rng) {
    require_walkable_prime(p);
    Field F2 = Field::quadratic_sampled(p, rng);
    SylowContext ctx2 = make_sylow_context(F2, 2, F2.find_nonresidue(2, rng));
    SylowContext ctx3 = make_sylow_context(F2, 3, F2.find_nonresidue(3, rng));

    Fq cur = detail::walk_start_vertex(F2);
    long steps = 2 * walk_rounds(p);

    UniPoly cubic = ModularPolynomial::phi2().instantiate(F2, cur);
    std::vector<Fq> first = solve_cubic(F2, ctx2, &ctx3, cubic.c[2], cubic.c[1], cubic.c[0]);
    if (first.size() != 3)
        fail(Errc::InvariantViolation, "supersingular start vertex must have three edges");
    Fq prev = cur;
    cur = first[rng.below_u64(first.size())];
    for (long k = 1; k < steps; ++k) {
        UniPoly c3 = ModularPolynomial::phi2().instantiate(F2, cur);
        auto [quad, rem] = poly_div_linear(F2, c3, prev);
        if (!F2.is_zero(rem))
            fail(Errc::InvariantViolation, "walk left the isogeny graph");
        std::vector<Fq> roots = solve_quadratic(F2, ctx2, quad.c[1], quad.c[0]);
        if (roots.empty())
            fail(Errc::InvariantViolation, "supersingular walk cannot get stuck");
        Fq nxt = roots[rng.below_u64(roots.size())];
        prev = cur;
        cur = nxt;
    }
    return curve_from_j(F2, cur);
}

// Supersingular curve over F_p: same idea restricted to F_p-rational steps.
// The prime-field supersingular graph has dead ends (vertices with a single
// rational edge); the walk simply stops there.
inline Curve gen_supersingular_fp(const Integer& p, Rng& rng) {
    require_walkable_prime(p);
    Field Fp(p);
    SylowContext ctx2 = make_sylow_context(Fp, 2, Fp.find_nonresidue(2, rng));
    std::optional<SylowContext> ctx3;
    if ((p - 1) % 3 == 0) ctx3 = make_sylow_context(Fp, 3, Fp.find_nonresidue(3, rng));

    Fq cur = detail::walk_start_vertex(Fp);
    long steps = 2 * walk_rounds(p);

    UniPoly cubic = ModularPolynomial::phi2().instantiate(Fp, cur);
    std::vector<Fq> first =
        solve_cubic(Fp, ctx2, ctx3 ? &*ctx3 : nullptr, cubic.c[2], cubic.c[1], cubic.c[0]);
    if (first.empty()) return curve_from_j(Fp, cur);
    Fq prev = cur;
    cur = first[rng.below_u64(first.size())];
    for (long k = 1; k < steps; ++k) {
        UniPoly c3 = ModularPolynomial::phi2().instantiate(Fp, cur);
        auto [quad, rem] = poly_div_linear(Fp, c3, prev);
        if (!Fp.is_zero(rem))
            fail(Errc::InvariantViolation, "walk left the isogeny graph");
        std::vector<Fq> roots = solve_quadratic(Fp, ctx2, quad.c[1], quad.c[0]);
        if (roots.empty()) break; // single rational edge: the walk ends here
        Fq nxt = roots[rng.below_u64(roots.size())];
        prev = cur;
        cur = nxt;
    }
    return curve_from_j(Fp, cur);
}

// Random nonsingular curve over F, proven ordinary by the graph walk.
inline Curve gen_ordinary(const Field& F, Rng& rng) {
    while (true) {
        Fq A = F.random_element(rng);
        Fq B = F.random_element(rng);
        Curve E{F, A, B};
        if (F.is_zero(curve_discriminant_term(E))) continue;
        ClassifierConfig cfg;
        cfg.seed = rng.next64();
        if (identify(E, cfg).result == Verdict::Result::Ordinary) return E;
    }
}

} // namespace ssid
