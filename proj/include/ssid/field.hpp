#pragma once

// Prime fields F_p and their quadratic extensions F_p(t), t^2 = alpha, with
// alpha a quadratic non-residue mod p.  That basis makes t^p = -t, so the
// field Frobenius is coefficient negation and F_p-membership is just c1 == 0.
//
// Elements are plain (c0, c1) pairs with both coefficients reduced into
// [0, p); all arithmetic goes through the Field object.  The lexicographic
// order on (c0, c1) is the canonical order used whenever an algorithm has to
// make a deterministic choice among field elements.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ssid/errors.hpp"
#include "ssid/rng.hpp"

namespace ssid {

using Integer = mpz_class;

struct Fq {
    Integer c0;
    Integer c1;

    bool operator==(const Fq& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fq& o) const { return !(*this == o); }
    bool operator<(const Fq& o) const {
        int c = cmp(c0, o.c0);
        if (c != 0) return c < 0;
        return cmp(c1, o.c1) < 0;
    }
};

inline bool is_probable_prime(const Integer& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 28) > 0;
}

class Field {
public:
    // F_p
    explicit Field(const Integer& p) : p_(p), degree_(1), alpha_(0) { check_char(); q_ = p_; }

    // F_p(t), t^2 = alpha; alpha must be a quadratic non-residue mod p.
    Field(const Integer& p, const Integer& alpha) : p_(p), degree_(2), alpha_(alpha) {
        check_char();
        if (alpha_ <= 0 || alpha_ >= p_)
            fail(Errc::BadInput, "alpha must lie in (0, p)");
        Integer e = (p_ - 1) / 2;
        Integer r;
        mpz_powm(r.get_mpz_t(), alpha_.get_mpz_t(), e.get_mpz_t(), p_.get_mpz_t());
        if (r != p_ - 1)
            fail(Errc::NotANonResidue, "alpha is not a quadratic non-residue mod p");
        q_ = p_ * p_;
    }

    // F_p(t) with a sampled non-residue (Las Vegas; deterministic per seed).
    static Field quadratic_sampled(const Integer& p, Rng& rng) {
        Field base(p);
        while (true) {
            Integer a = rng.below(p - 1) + 1;
            Integer r;
            Integer e = (p - 1) / 2;
            mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
            if (r == p - 1) return Field(p, a);
        }
    }

    // F_p(t) with the smallest non-residue (canonical, deterministic).
    static Field quadratic_canonical(const Integer& p) {
        Field base(p);
        Integer e = (p - 1) / 2;
        for (Integer a = 2; a < p; ++a) {
            Integer r;
            mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
            if (r == p - 1) return Field(p, a);
        }
        fail(Errc::BadInput, "no quadratic non-residue found (p must be odd)");
    }

    const Integer& p() const { return p_; }
    int degree() const { return degree_; }
    const Integer& alpha() const { return alpha_; }
    const Integer& q() const { return q_; }

    bool same_as(const Field& o) const {
        return p_ == o.p_ && degree_ == o.degree_ && alpha_ == o.alpha_;
    }

    Fq zero() const { return Fq{0, 0}; }
    Fq one() const { return Fq{1, 0}; }

    Fq elt(const Integer& c0) const {
        Fq x{c0 % p_, 0};
        if (x.c0 < 0) x.c0 += p_;
        return x;
    }

    Fq elt(const Integer& c0, const Integer& c1) const {
        if (degree_ == 1 && c1 % p_ != 0)
            fail(Errc::BadInput, "extension coefficient in a prime field element");
        Fq x{c0 % p_, c1 % p_};
        if (x.c0 < 0) x.c0 += p_;
        if (x.c1 < 0) x.c1 += p_;
        return x;
    }

    bool is_zero(const Fq& x) const { return x.c0 == 0 && x.c1 == 0; }
    bool in_prime_field(const Fq& x) const { return x.c1 == 0; }

    Fq add(const Fq& a, const Fq& b) const {
        Fq r{a.c0 + b.c0, a.c1 + b.c1};
        if (r.c0 >= p_) r.c0 -= p_;
        if (r.c1 >= p_) r.c1 -= p_;
        return r;
    }

    Fq sub(const Fq& a, const Fq& b) const {
        Fq r{a.c0 - b.c0, a.c1 - b.c1};
        if (r.c0 < 0) r.c0 += p_;
        if (r.c1 < 0) r.c1 += p_;
        return r;
    }

    Fq neg(const Fq& a) const {
        Fq r{a.c0 == 0 ? Integer(0) : p_ - a.c0, a.c1 == 0 ? Integer(0) : p_ - a.c1};
        return r;
    }

    Fq mul(const Fq& a, const Fq& b) const {
        if (a.c1 == 0 && b.c1 == 0) return Fq{a.c0 * b.c0 % p_, 0};
        // (a0 + a1 t)(b0 + b1 t) = a0 b0 + alpha a1 b1 + (a0 b1 + a1 b0) t
        Integer r0 = (a.c0 * b.c0 + alpha_ * (a.c1 * b.c1)) % p_;
        Integer r1 = (a.c0 * b.c1 + a.c1 * b.c0) % p_;
        return Fq{r0, r1};
    }

    Fq mul_small(const Fq& a, long k) const {
        Integer kk(k);
        kk %= p_;
        if (kk < 0) kk += p_;
        return Fq{a.c0 * kk % p_, a.c1 * kk % p_};
    }

    Fq sqr(const Fq& a) const { return mul(a, a); }

    Fq inv(const Fq& a) const {
        if (is_zero(a)) fail(Errc::DivisionByZero, "division by zero");
        if (a.c1 == 0) {
            Integer r;
            if (mpz_invert(r.get_mpz_t(), a.c0.get_mpz_t(), p_.get_mpz_t()) == 0)
                fail(Errc::DivisionByZero, "noninvertible element (modulus not prime?)");
            return Fq{r, 0};
        }
        // 1/(a0 + a1 t) = (a0 - a1 t) / (a0^2 - alpha a1^2)
        Integer norm = (a.c0 * a.c0 - alpha_ * (a.c1 * a.c1)) % p_;
        if (norm < 0) norm += p_;
        Integer ninv;
        if (mpz_invert(ninv.get_mpz_t(), norm.get_mpz_t(), p_.get_mpz_t()) == 0)
            fail(Errc::DivisionByZero, "zero norm");
        return Fq{a.c0 * ninv % p_, (p_ - a.c1) * ninv % p_};
    }

    Fq div(const Fq& a, const Fq& b) const { return mul(a, inv(b)); }

    enum class OpKind { Add, Sub, Mul, Div };
    Fq op(const Fq& a, const Fq& b, OpKind kind) const {
        switch (kind) {
        case OpKind::Add: return add(a, b);
        case OpKind::Sub: return sub(a, b);
        case OpKind::Mul: return mul(a, b);
        case OpKind::Div: return div(a, b);
        }
        fail(Errc::BadInput, "unknown field operation");
    }

    // x^e, e >= 0, with x^0 = 1 for every x (including 0).
    Fq pow(const Fq& x, const Integer& e) const {
        if (e == 0) return one();
        if (x.c1 == 0) {
            Integer r;
            mpz_powm(r.get_mpz_t(), x.c0.get_mpz_t(), e.get_mpz_t(), p_.get_mpz_t());
            return Fq{r, 0};
        }
        Fq acc = one();
        size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (size_t i = nbits; i-- > 0;) {
            acc = sqr(acc);
            if (mpz_tstbit(e.get_mpz_t(), i)) acc = mul(acc, x);
        }
        return acc;
    }

    // x^p (the field Frobenius); fixes exactly the prime field.
    Fq frobenius(const Fq& x) const {
        if (x.c1 == 0) return x;
        return Fq{x.c0, p_ - x.c1};
    }

    // Euler criterion: x^((q-1)/r) == 1.
    bool is_rth_residue(const Fq& x, unsigned long r) const {
        if (is_zero(x)) fail(Errc::ZeroInput, "residue test on zero");
        Integer qm1 = q_ - 1;
        if (qm1 % r != 0)
            fail(Errc::RNotDividingGroupOrder, "r does not divide q-1");
        return pow(x, qm1 / r) == one();
    }

    // Random element that fails the r-th residue test; expected r/(r-1) draws.
    Fq find_nonresidue(unsigned long r, Rng& rng) const {
        Integer qm1 = q_ - 1;
        if (qm1 % r != 0)
            fail(Errc::RNotDividingGroupOrder, "r does not divide q-1");
        while (true) {
            Fq x = random_nonzero(rng);
            if (!is_rth_residue(x, r)) return x;
        }
    }

    Fq random_element(Rng& rng) const {
        return Fq{rng.below(p_), degree_ == 2 ? rng.below(p_) : Integer(0)};
    }

    Fq random_nonzero(Rng& rng) const {
        while (true) {
            Fq x = random_element(rng);
            if (!is_zero(x)) return x;
        }
    }

    // chi(x) in {-1, 0, +1}: the quadratic character of F_q.
    int chi(const Fq& x) const {
        if (is_zero(x)) return 0;
        return is_rth_residue(x, 2) ? 1 : -1;
    }

    // Element with index i under the canonical order, i in [0, q).
    Fq elt_at(const Integer& i) const {
        if (degree_ == 1) return Fq{i, 0};
        return Fq{i / p_, i % p_}; // iterates c1 fastest: still a bijection
    }

    std::string to_string(const Fq& x) const {
        if (x.c1 == 0) return x.c0.get_str();
        return x.c0.get_str() + "," + x.c1.get_str();
    }

    std::string to_string() const {
        if (degree_ == 1) return p_.get_str();
        return p_.get_str() + ";" + alpha_.get_str();
    }

    Fq parse_element(const std::string& s) const {
        auto comma = s.find(',');
        try {
            if (comma == std::string::npos) return elt(Integer(s));
            return elt(Integer(s.substr(0, comma)), Integer(s.substr(comma + 1)));
        } catch (const std::invalid_argument&) {
            fail(Errc::ParseError, "bad field element: " + s);
        }
    }

    static Field parse(const std::string& s) {
        auto semi = s.find(';');
        try {
            if (semi == std::string::npos) return Field(Integer(s));
            return Field(Integer(s.substr(0, semi)), Integer(s.substr(semi + 1)));
        } catch (const std::invalid_argument&) {
            fail(Errc::ParseError, "bad field spec: " + s);
        }
    }

private:
    void check_char() const {
        if (p_ <= 3) fail(Errc::CharTooSmall, "characteristic must exceed 3");
        if (!is_probable_prime(p_)) fail(Errc::NotPrime, "p is not prime");
    }

    Integer p_;
    int degree_;
    Integer alpha_;
    Integer q_;
};

} // namespace ssid
