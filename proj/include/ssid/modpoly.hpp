#pragma once

// Classical modular polynomials Phi_ell in Z[X,Y]: the level-2 polynomial is
// built in, higher levels load from text tables ("ell <l>" header, then one
// "<dx> <dy> <coeff>" line per monomial with dx >= dy; symmetry implied).
//
// instantiate() reduces Phi_ell(j, X) into F_q[X]; splits_completely() is
// the linear-factor stripping loop: g = gcd(f, X^q - X), then repeatedly
// f <- f/g, g <- gcd(f, g) until deg g = 0, and f split completely iff it
// ended at degree 0.

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ssid/field.hpp"
#include "ssid/unipoly.hpp"

namespace ssid {

class ModularPolynomial {
public:
    using Key = std::pair<int, int>; // (dx, dy), dx >= dy

    ModularPolynomial(int ell, std::map<Key, Integer> coeffs)
        : ell_(ell), coeffs_(std::move(coeffs)) {
        validate();
    }

    int ell() const { return ell_; }
    const std::map<Key, Integer>& coefficients() const { return coeffs_; }

    Integer coefficient(int dx, int dy) const {
        if (dx < dy) std::swap(dx, dy);
        auto it = coeffs_.find({dx, dy});
        return it == coeffs_.end() ? Integer(0) : it->second;
    }

    // The level-2 polynomial, exact integer coefficients.
    static const ModularPolynomial& phi2() {
        static const ModularPolynomial instance(2, {
            {{3, 0}, Integer(1)},
            {{2, 2}, Integer(-1)},
            {{2, 1}, Integer(1488)},
            {{2, 0}, Integer(-162000)},
            {{1, 1}, Integer(40773375)},
            {{1, 0}, Integer("8748000000")},
            {{0, 0}, Integer("-157464000000000")},
        });
        return instance;
    }

    static ModularPolynomial load(int ell, const std::string& dir) {
        if (ell < 2 || !is_probable_prime(Integer(ell)))
            fail(Errc::NotPrime, "modular polynomial level must be prime: " + std::to_string(ell));
        std::string path = dir + "/phi" + std::to_string(ell) + ".txt";
        std::ifstream in(path);
        if (!in)
            fail(Errc::FileMissing, "no modular polynomial table: " + path);
        std::map<Key, Integer> coeffs;
        std::string line;
        int lineno = 0;
        bool saw_header = false;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            std::string first;
            if (!(ss >> first)) continue;
            if (!saw_header) {
                int file_ell = -1;
                if (first != "ell" || !(ss >> file_ell) || file_ell != ell)
                    fail(Errc::ParseError, path + ":" + std::to_string(lineno) +
                                                ": expected header \"ell " + std::to_string(ell) + "\"");
                saw_header = true;
                continue;
            }
            int dx = 0, dy = 0;
            std::string coeff;
            try {
                dx = std::stoi(first);
            } catch (const std::exception&) {
                fail(Errc::ParseError, path + ":" + std::to_string(lineno) + ": bad exponent");
            }
            if (!(ss >> dy >> coeff))
                fail(Errc::ParseError, path + ":" + std::to_string(lineno) + ": expected dx dy coeff");
            if (dx < dy)
                fail(Errc::ParseError, path + ":" + std::to_string(lineno) + ": dx < dy");
            Integer c;
            if (mpz_set_str(c.get_mpz_t(), coeff.c_str(), 10) != 0)
                fail(Errc::ParseError, path + ":" + std::to_string(lineno) + ": bad coefficient");
            coeffs[{dx, dy}] = c;
        }
        if (!saw_header)
            fail(Errc::ParseError, path + ": missing \"ell\" header");
        return ModularPolynomial(ell, std::move(coeffs));
    }

    // Phi_ell(j, X) in F_q[X]; monic of degree ell+1.
    UniPoly instantiate(const Field& F, const Fq& j) const {
        std::vector<Fq> jpow(ell_ + 2);
        jpow[0] = F.one();
        for (int i = 1; i <= ell_ + 1; ++i) jpow[i] = F.mul(jpow[i - 1], j);
        std::vector<Fq> out(ell_ + 2, F.zero());
        for (const auto& [key, c] : coeffs_) {
            auto [dx, dy] = key;
            Fq cf = F.elt(c);
            out[dx] = F.add(out[dx], F.mul(cf, jpow[dy]));
            if (dx != dy) out[dy] = F.add(out[dy], F.mul(cf, jpow[dx]));
        }
        UniPoly f = poly_from(F, std::move(out));
        if (f.degree() != ell_ + 1 || f.c.back() != F.one())
            fail(Errc::InvariantViolation, "instantiated modular polynomial is not monic");
        return f;
    }

    // Phi_ell(a, b) as a field value.
    Fq evaluate(const Field& F, const Fq& a, const Fq& b) const {
        return poly_eval(F, instantiate(F, a), b);
    }

private:
    void validate() const {
        for (const auto& [key, c] : coeffs_) {
            auto [dx, dy] = key;
            if (dx < dy || dx > ell_ + 1 || dy > ell_ + 1 || c == 0)
                fail(Errc::InvariantViolation, "malformed modular polynomial monomial");
        }
        if (coefficient(ell_ + 1, 0) != 1)
            fail(Errc::InvariantViolation, "leading monomial X^(ell+1) must have coefficient 1");
        if (coefficient(ell_, ell_) != -1)
            fail(Errc::InvariantViolation, "monomial X^ell Y^ell must have coefficient -1");
        if (coefficient(ell_ + 1, ell_ + 1) != 0)
            fail(Errc::InvariantViolation, "monomial X^(ell+1) Y^(ell+1) must be absent");
    }

    int ell_;
    std::map<Key, Integer> coeffs_;
};

// True iff f factors into linear pieces over its own coefficient field.
inline bool splits_completely(const Field& F, const UniPoly& f_in) {
    if (f_in.degree() < 1) fail(Errc::BadInput, "degree must be at least 1");
    UniPoly f = poly_make_monic(F, f_in);
    UniPoly xq = poly_xq_mod(F, f);
    UniPoly g = poly_gcd(F, f, poly_sub(F, xq, poly_x(F)));
    while (g.degree() > 0) {
        auto [quo, rem] = poly_divrem(F, f, g);
        if (!rem.is_zero())
            fail(Errc::InvariantViolation, "gcd does not divide f");
        f = quo;
        g = poly_gcd(F, f, g);
    }
    return f.degree() == 0;
}

// Fast path for f in F_p[X]: true iff every irreducible factor has degree
// at most 2, i.e. f splits completely over the quadratic extension.  Same
// stripping loop, with X^(p^2) - X in place of X^p - X.
inline bool splits_over_quadratic_extension(const Field& F, const UniPoly& f_in) {
    if (F.degree() != 1) fail(Errc::BadInput, "fast path expects a prime-field polynomial");
    if (f_in.degree() < 1) fail(Errc::BadInput, "degree must be at least 1");
    UniPoly f = poly_make_monic(F, f_in);
    UniPoly xp = poly_powmod(F, poly_x(F), F.p(), f);
    UniPoly xp2 = poly_compose_mod(F, xp, xp, f);
    UniPoly g = poly_gcd(F, f, poly_sub(F, xp2, poly_x(F)));
    while (g.degree() > 0) {
        auto [quo, rem] = poly_divrem(F, f, g);
        if (!rem.is_zero())
            fail(Errc::InvariantViolation, "gcd does not divide f");
        f = quo;
        g = poly_gcd(F, f, g);
    }
    return f.degree() == 0;
}

// Data directory resolution: explicit argument wins, then SSID_MODPOLY_DIR,
// then the compiled-in default.
inline std::string modpoly_dir(const std::string& override_dir = "") {
    if (!override_dir.empty()) return override_dir;
    if (const char* env = std::getenv("SSID_MODPOLY_DIR"); env && *env) return env;
#ifdef SSID_DATA_DIR
    return SSID_DATA_DIR;
#else
    return "data/modpoly";
#endif
}

} // namespace ssid
