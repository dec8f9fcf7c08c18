#pragma once

// Test fixture generator: classical modular polynomials Phi_ell with
// coefficients reduced mod a (large) prime p, written in the same table
// format the library loads.  Used by the acceptance benchmark, which needs
// levels far beyond the shipped integer tables; at 192-bit p the exact
// integer coefficients are irrelevant because the prover reduces them mod p
// anyway.
//
// Method: entirely independent of the library's modular-polynomial code.
// From the q-expansion of j (built out of E4 and the eta product), form the
// power sums of the ell+1 conjugates j(ell*tau), j((tau+k)/ell) -- summing
// over k keeps only exponents divisible by ell, so everything stays over
// F_p -- then Newton's identities give the elementary symmetric functions,
// and peeling principal parts rewrites them as polynomials in j.  The peeled
// tails must vanish identically and the coefficient table must come out
// symmetric; both are asserted.
//
// Dense series products are Kronecker-packed into single GMP integer
// multiplications.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "ssid/field.hpp"

namespace ssid::phigen {

using Series = std::vector<Integer>; // plain power series, index = exponent

class KroneckerRing {
public:
    KroneckerRing(const Integer& p, size_t max_len) : p_(p) {
        size_t pbits = mpz_sizeinbase(p.get_mpz_t(), 2);
        size_t lenbits = 1;
        while ((max_len >> lenbits) != 0) ++lenbits;
        words_ = (2 * pbits + lenbits + 2 + 63) / 64;
    }

    const Integer& p() const { return p_; }

    // Coefficient-wise product mod p, truncated to out_len entries.
    Series mul(const Series& a, const Series& b, size_t out_len) const {
        if (a.empty() || b.empty()) return Series(out_len, 0);
        Integer A = pack(a), B = pack(b);
        Integer C = A * B;
        return unpack(C, std::min(out_len, a.size() + b.size() - 1), out_len);
    }

private:
    Integer pack(const Series& a) const {
        std::vector<mp_limb_t> buf(a.size() * words_, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            size_t count = 0;
            mpz_export(&buf[i * words_], &count, -1, sizeof(mp_limb_t), 0, 0,
                       a[i].get_mpz_t());
        }
        Integer out;
        mpz_import(out.get_mpz_t(), buf.size(), -1, sizeof(mp_limb_t), 0, 0, buf.data());
        return out;
    }

    Series unpack(const Integer& c, size_t have, size_t out_len) const {
        std::vector<mp_limb_t> buf(have * words_ + words_, 0);
        size_t count = 0;
        mpz_export(buf.data(), &count, -1, sizeof(mp_limb_t), 0, 0, c.get_mpz_t());
        Series out(out_len, 0);
        Integer tmp;
        for (size_t i = 0; i < have && i < out_len; ++i) {
            mpz_import(tmp.get_mpz_t(), words_, -1, sizeof(mp_limb_t), 0, 0,
                       &buf[i * words_]);
            out[i] = tmp % p_;
        }
        return out;
    }

    Integer p_;
    size_t words_;
};

// Coefficients of j(tau) mod p: out[i] is the coefficient of q^(i-1),
// i = 0..n_max+1.
inline Series j_series_modp(const Integer& p, size_t n_max, const KroneckerRing& ring) {
    size_t len = n_max + 2;
    // E4 = 1 + 240 sum sigma_3(n) q^n; sigma_3 fits in 64 bits at this scale.
    std::vector<unsigned long long> sig(len, 0);
    for (unsigned long long d = 1; d < len; ++d) {
        unsigned long long d3 = d * d * d;
        for (size_t m = d; m < len; m += d) sig[m] += d3;
    }
    Series e4(len, 0);
    e4[0] = 1;
    for (size_t n = 1; n < len; ++n) e4[n] = Integer(240) * sig[n] % p;

    // eta^3 = q^(1/8) sum (-1)^k (2k+1) q^(k(k+1)/2); Delta = q * (eta^3-part)^8
    Series f3(len, 0);
    for (unsigned long long k = 0;; ++k) {
        unsigned long long e = k * (k + 1) / 2;
        if (e >= len) break;
        Integer v = Integer(2 * k + 1) % p;
        f3[e] = (k % 2 == 0) ? v : (p - v) % p;
    }
    Series d = ring.mul(f3, f3, len);
    d = ring.mul(d, d, len);
    d = ring.mul(d, d, len); // f3^8

    // inverse of d by Newton iteration: x <- x(2 - d x)
    Series x{1};
    size_t prec = 1;
    while (prec < len) {
        size_t prec2 = std::min(2 * prec, len);
        Series dx = ring.mul(Series(d.begin(), d.begin() + prec2), x, prec2);
        Series two_minus(prec2, 0);
        for (size_t i = 0; i < prec2; ++i) two_minus[i] = (p - dx[i]) % p;
        two_minus[0] = (two_minus[0] + 2) % p;
        x = ring.mul(x, two_minus, prec2);
        prec = prec2;
    }

    Series e4c = ring.mul(ring.mul(e4, e4, len), e4, len);
    Series jc = ring.mul(e4c, x, len);
    if (jc[0] != 1 || jc[1] != Integer(744) % p || jc[2] != Integer(196884) % p)
        fail(Errc::InvariantViolation, "j-expansion self-check failed");
    return jc;
}

// Short Laurent window [lo, hi] helper used for the symmetric-function part.
struct Window {
    long lo = 0;
    std::vector<Integer> c; // coefficient of q^(lo+i)

    Integer coeff(long e) const {
        long i = e - lo;
        return (i >= 0 && i < static_cast<long>(c.size())) ? c[i] : Integer(0);
    }
};

inline Window window_mul(const Integer& p, const Window& a, const Window& b, long lo, long hi) {
    Window out{lo, std::vector<Integer>(hi - lo + 1, 0)};
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        long ea = a.lo + static_cast<long>(i);
        for (size_t k = 0; k < b.c.size(); ++k) {
            long e = ea + b.lo + static_cast<long>(k);
            if (e < lo || e > hi || b.c[k] == 0) continue;
            out.c[e - lo] = (out.c[e - lo] + a.c[i] * b.c[k]) % p;
        }
    }
    return out;
}

inline void window_add_scaled(const Integer& p, Window& acc, const Window& other,
                              const Integer& scale, long shift) {
    for (size_t i = 0; i < other.c.size(); ++i) {
        long e = other.lo + static_cast<long>(i) + shift;
        long k = e - acc.lo;
        if (k < 0 || k >= static_cast<long>(acc.c.size())) continue;
        acc.c[k] = (acc.c[k] + scale * other.c[i]) % p;
    }
}

struct PhiTable {
    int ell;
    std::map<std::pair<int, int>, Integer> coeffs; // dx >= dy, reduced mod p
};

// Phi_ell mod p from the master j-series (which must cover exponents up to
// ell*(ell+5) + ell + 2).
inline PhiTable phi_modp(int ell, const Integer& p, const Series& jc,
                         const KroneckerRing& ring) {
    const long hi = ell + 5;
    const size_t e_hi = static_cast<size_t>(ell) * hi;
    const size_t e_full = e_hi + ell + 2;

    // jp[m]: coefficients of j^m at exponents -m .. e_full (vector index
    // i = exponent + m).  One exponent of trusted precision is lost per
    // multiplication, hence the e_full headroom.
    std::vector<Series> jp(ell + 2);
    jp[1] = Series(jc.begin(), jc.begin() + std::min(jc.size(), e_full + 2));
    for (int m = 2; m <= ell + 1; ++m)
        jp[m] = ring.mul(jp[m - 1], jp[1], e_full + 1 + m);

    // Power sums of the ell conjugates j((tau+k)/ell): the sum over k keeps
    // exponents divisible by ell (scaled by ell).
    const long lo = -2;
    std::vector<Window> ps(ell + 1);
    for (int m = 1; m <= ell; ++m) {
        Window w{lo, std::vector<Integer>(hi - lo + 1, 0)};
        for (long e = lo; e <= hi; ++e) {
            long n = static_cast<long>(ell) * e; // exponent in the j^m series
            long i = n + m;
            if (i >= 0 && i < static_cast<long>(jp[m].size()))
                w.c[e - lo] = Integer(ell) * jp[m][i] % p;
        }
        ps[m] = w;
    }

    // Newton's identities: k e_k = sum (-1)^(i-1) e_{k-i} p_i.
    const long wlo = -4;
    std::vector<Window> esym(ell + 1);
    esym[0] = Window{0, {1}};
    for (int k = 1; k <= ell; ++k) {
        Window acc{wlo, std::vector<Integer>(hi - wlo + 1, 0)};
        for (int i = 1; i <= k; ++i) {
            Window term = window_mul(p, esym[k - i], ps[i], wlo, hi);
            Integer sign = (i % 2 == 1) ? Integer(1) : p - 1;
            window_add_scaled(p, acc, term, sign, 0);
        }
        Integer kinv;
        mpz_invert(kinv.get_mpz_t(), Integer(k).get_mpz_t(), p.get_mpz_t());
        for (auto& v : acc.c) v = v * kinv % p;
        esym[k] = acc;
    }

    // Fold in the last conjugate j(ell*tau): its terms sit at exponents
    // ell*(d-1) and only those <= 3 can reach the peeling window.
    const long blo = -(ell + 1), bhi = 2;
    std::vector<Window> big(ell + 2);
    big[0] = Window{0, {1}};
    for (int i = 1; i <= ell + 1; ++i) {
        Window acc{blo, std::vector<Integer>(bhi - blo + 1, 0)};
        if (i <= ell) window_add_scaled(p, acc, esym[i], 1, 0);
        const Window& prev = esym[i - 1];
        for (long d = 0; static_cast<long>(ell) * (d - 1) <= 3; ++d)
            window_add_scaled(p, acc, prev, jc[d], ell * (d - 1));
        big[i] = acc;
    }

    // Phi(X, j) = sum_i (-1)^i big[i] X^(ell+1-i); peel each coefficient into
    // a polynomial in j, asserting that nothing survives above q^0.
    PhiTable table{ell, {}};
    for (int i = 0; i <= ell + 1; ++i) {
        int xdeg = ell + 1 - i;
        Window ser = big[i];
        if (i % 2 == 1)
            for (auto& v : ser.c) v = (p - v) % p;
        std::map<int, Integer> mono;
        for (long e = blo; e < 0; ++e) {
            Integer c = ser.coeff(e);
            if (c == 0) continue;
            int n = static_cast<int>(-e);
            mono[n] = c;
            // subtract c * j^n over the window
            for (long ee = e; ee <= bhi; ++ee) {
                long idx = ee + n;
                if (idx < 0 || idx >= static_cast<long>(jp[n].size())) continue;
                long k = ee - ser.lo;
                ser.c[k] = (ser.c[k] + (p - c) * jp[n][idx]) % p;
            }
        }
        if (ser.coeff(0) != 0) mono[0] = ser.coeff(0);
        if (ser.coeff(1) != 0 || ser.coeff(2) != 0)
            fail(Errc::InvariantViolation, "nonzero tail after peeling");
        for (auto& [ydeg, c] : mono)
            if (xdeg >= ydeg) table.coeffs[{xdeg, ydeg}] = c;
            else if (table.coeffs.count({ydeg, xdeg}) == 0)
                fail(Errc::InvariantViolation, "asymmetric coefficient table");
            else if (table.coeffs.at({ydeg, xdeg}) != c)
                fail(Errc::InvariantViolation, "asymmetric coefficient table");
    }
    if (table.coeffs.at({ell + 1, 0}) != 1 % p)
        fail(Errc::InvariantViolation, "leading coefficient is not 1");
    if (table.coeffs.at({ell, ell}) != p - 1)
        fail(Errc::InvariantViolation, "X^ell Y^ell coefficient is not -1");
    return table;
}

inline void write_table(const std::string& dir, const Integer& p, const PhiTable& t) {
    std::ofstream out(dir + "/phi" + std::to_string(t.ell) + ".txt");
    out << "# level " << t.ell << ", coefficients reduced mod " << p.get_str() << "\n";
    out << "ell " << t.ell << "\n";
    for (auto it = t.coeffs.rbegin(); it != t.coeffs.rend(); ++it) {
        auto [dx, dy] = it->first;
        // The two structurally pinned coefficients are written exactly so the
        // loader's integer invariants hold.
        std::string c = it->second.get_str();
        if (dx == t.ell + 1 && dy == 0) c = "1";
        if (dx == t.ell && dy == t.ell) c = "-1";
        out << dx << " " << dy << " " << c << "\n";
    }
}

// Generate tables for all the given levels into dir (skipped if already
// present); returns dir.  Levels are processed by two workers.
inline std::string ensure_tables(const Integer& p, const std::vector<int>& levels,
                                 const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<int> missing;
    for (int ell : levels)
        if (!std::filesystem::exists(dir + "/phi" + std::to_string(ell) + ".txt"))
            missing.push_back(ell);
    if (missing.empty()) return dir;

    int max_ell = *std::max_element(missing.begin(), missing.end());
    size_t n_max = static_cast<size_t>(max_ell) * (max_ell + 5) + max_ell + 2;
    KroneckerRing ring(p, n_max + 2);
    Series jc = j_series_modp(p, n_max, ring);

    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= missing.size()) break;
            int ell = missing[i];
            write_table(dir, p, phi_modp(ell, p, jc, ring));
        }
    };
    std::thread t1(worker), t2(worker);
    t1.join();
    t2.join();
    return dir;
}

} // namespace ssid::phigen
