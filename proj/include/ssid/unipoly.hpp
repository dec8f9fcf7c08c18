#pragma once

// Dense univariate polynomials over F_q, low-to-high coefficient order with
// no trailing zeros.  Schoolbook arithmetic throughout: every consumer in
// this library works at degree <= ell+1 for small ell, where the classical
// complexity is irrelevant next to the exponentiation counts.

#include <algorithm>
#include <utility>
#include <vector>

#include "ssid/field.hpp"

namespace ssid {

struct UniPoly {
    std::vector<Fq> c; // c[i] is the coefficient of X^i

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

inline void poly_trim(const Field& F, UniPoly& f) {
    while (!f.c.empty() && F.is_zero(f.c.back())) f.c.pop_back();
}

inline UniPoly poly_from(const Field& F, std::vector<Fq> coeffs) {
    UniPoly f{std::move(coeffs)};
    poly_trim(F, f);
    return f;
}

inline UniPoly poly_x(const Field& F) { return UniPoly{{F.zero(), F.one()}}; }

inline UniPoly poly_const(const Field& F, const Fq& a) {
    UniPoly f{{a}};
    poly_trim(F, f);
    return f;
}

inline bool poly_equal(const UniPoly& a, const UniPoly& b) { return a.c == b.c; }

inline UniPoly poly_add(const Field& F, const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), F.zero());
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = F.add(r.c[i], b.c[i]);
    poly_trim(F, r);
    return r;
}

inline UniPoly poly_sub(const Field& F, const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), F.zero());
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = F.sub(r.c[i], b.c[i]);
    poly_trim(F, r);
    return r;
}

inline UniPoly poly_scale(const Field& F, const UniPoly& a, const Fq& s) {
    if (F.is_zero(s)) return UniPoly{};
    UniPoly r = a;
    for (auto& x : r.c) x = F.mul(x, s);
    return r;
}

inline UniPoly poly_mul(const Field& F, const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly{};
    UniPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, F.zero());
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (F.is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
    }
    poly_trim(F, r);
    return r;
}

// Quotient and remainder by a nonzero divisor.
inline std::pair<UniPoly, UniPoly> poly_divrem(const Field& F, const UniPoly& a,
                                               const UniPoly& b) {
    if (b.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
    if (a.degree() < b.degree()) return {UniPoly{}, a};
    Fq lead_inv = F.inv(b.c.back());
    UniPoly rem = a;
    UniPoly quo;
    quo.c.assign(a.c.size() - b.c.size() + 1, F.zero());
    for (int i = a.degree(); i >= b.degree(); --i) {
        Fq coeff = F.mul(rem.c[i], lead_inv);
        if (F.is_zero(coeff)) continue;
        quo.c[i - b.degree()] = coeff;
        for (int j = 0; j <= b.degree(); ++j)
            rem.c[i - b.degree() + j] = F.sub(rem.c[i - b.degree() + j], F.mul(coeff, b.c[j]));
    }
    poly_trim(F, quo);
    poly_trim(F, rem);
    return {quo, rem};
}

inline UniPoly poly_mod(const Field& F, const UniPoly& a, const UniPoly& b) {
    return poly_divrem(F, a, b).second;
}

// Divide by (X - r); returns {quotient, remainder value}.
inline std::pair<UniPoly, Fq> poly_div_linear(const Field& F, const UniPoly& a, const Fq& r) {
    if (a.is_zero()) return {UniPoly{}, F.zero()};
    UniPoly quo;
    quo.c.assign(a.c.size() > 1 ? a.c.size() - 1 : 0, F.zero());
    Fq carry = F.zero();
    for (int i = a.degree(); i >= 0; --i) {
        carry = F.add(F.mul(carry, r), a.c[i]);
        if (i > 0) quo.c[i - 1] = carry;
    }
    poly_trim(F, quo);
    return {quo, carry};
}

inline Fq poly_eval(const Field& F, const UniPoly& a, const Fq& x) {
    Fq acc = F.zero();
    for (int i = a.degree(); i >= 0; --i) acc = F.add(F.mul(acc, x), a.c[i]);
    return acc;
}

inline UniPoly poly_make_monic(const Field& F, const UniPoly& a) {
    if (a.is_zero() || a.c.back() == F.one()) return a;
    return poly_scale(F, a, F.inv(a.c.back()));
}

// Monic gcd (Euclid).
inline UniPoly poly_gcd(const Field& F, UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_make_monic(F, a);
}

inline UniPoly poly_mulmod(const Field& F, const UniPoly& a, const UniPoly& b,
                           const UniPoly& m) {
    return poly_mod(F, poly_mul(F, a, b), m);
}

// base^e mod m, e >= 0.
inline UniPoly poly_powmod(const Field& F, const UniPoly& base, const Integer& e,
                           const UniPoly& m) {
    UniPoly acc = poly_mod(F, poly_const(F, F.one()), m);
    if (e == 0) return acc;
    UniPoly b = poly_mod(F, base, m);
    size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = nbits; i-- > 0;) {
        acc = poly_mulmod(F, acc, acc, m);
        if (mpz_tstbit(e.get_mpz_t(), i)) acc = poly_mulmod(F, acc, b, m);
    }
    return acc;
}

// g(h) mod m by Horner.
inline UniPoly poly_compose_mod(const Field& F, const UniPoly& g, const UniPoly& h,
                                const UniPoly& m) {
    UniPoly acc;
    for (int i = g.degree(); i >= 0; --i) {
        acc = poly_mulmod(F, acc, h, m);
        acc = poly_add(F, acc, poly_const(F, g.c[i]));
    }
    return poly_mod(F, acc, m);
}

// Apply the coefficient Frobenius c -> c^p.
inline UniPoly poly_coeff_frobenius(const Field& F, const UniPoly& a) {
    UniPoly r = a;
    for (auto& x : r.c) x = F.frobenius(x);
    return r;
}

// X^q mod f for the ambient field of f.  Over F_p(t) this is computed as two
// p-power steps: A = X^p mod f, then X^(p^2) = A^sigma(A) mod f, where sigma
// is the coefficient Frobenius (free in this basis).
inline UniPoly poly_xq_mod(const Field& F, const UniPoly& f) {
    UniPoly xp = poly_powmod(F, poly_x(F), F.p(), f);
    if (F.degree() == 1) return xp;
    return poly_compose_mod(F, poly_coeff_frobenius(F, xp), xp, f);
}

// All roots in F_q by scanning the field; desk-scale only.  Multiplicities
// are recovered by repeated division.
inline std::vector<Fq> poly_roots_bruteforce(const Field& F, const UniPoly& f) {
    std::vector<Fq> roots;
    if (f.degree() < 1) return roots;
    UniPoly g = f;
    for (Integer i = 0; i < F.q(); ++i) {
        Fq x = F.elt_at(i);
        if (!F.is_zero(poly_eval(F, g, x))) continue;
        while (true) {
            auto [quo, rem] = poly_div_linear(F, g, x);
            if (!F.is_zero(rem)) break;
            roots.push_back(x);
            g = quo;
        }
        if (g.degree() < 1) break;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace ssid
