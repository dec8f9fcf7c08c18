#!/usr/bin/env python3
"""Generate classical modular polynomial tables (data/modpoly/phi<l>.txt).

Computes Phi_l(X,Y) over Z for small prime levels l from the q-expansion of
the j-function, using the product

    Phi_l(X, j(tau)) = (X - j(l*tau)) * prod_{k=0..l-1} (X - j((tau+k)/l))

The elementary symmetric functions of the conjugates are obtained from their
power sums (Newton's identities).  Summing j((tau+k)/l)^m over k kills every
coefficient whose exponent is not a multiple of l, so the whole computation
stays in Z[[q]] -- no cyclotomic arithmetic is needed.  Each symmetric
function is then rewritten as an integer polynomial in j by peeling off
principal parts.

Self-checks: known j-coefficients, exact symmetry in X/Y, the Kronecker
congruence Phi_l = (X^l - Y)(X - Y^l) mod l, and (for l = 2) the full
textbook coefficient list.

Usage: python3 scripts/modpoly_tables.py [outdir]
"""

import sys
from pathlib import Path

LEVELS = [2, 3, 5, 7, 11, 13]

# coefficient of q^-1, q^0, q^1, ... of j(tau)
J_HEAD = [1, 744, 196884, 21493760, 864299970, 20245856256]

PHI2_EXPECTED = {
    (3, 0): 1,
    (2, 2): -1,
    (2, 1): 1488,
    (2, 0): -162000,
    (1, 1): 40773375,
    (1, 0): 8748000000,
    (0, 0): -157464000000000,
}


def sigma3_table(n_max):
    s = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        d3 = d * d * d
        for m in range(d, n_max + 1, d):
            s[m] += d3
    return s


def series_mul(a, b, n_max):
    """Product of two plain power series (index = exponent), truncated."""
    out = [0] * (n_max + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > n_max:
            continue
        top = min(len(b) - 1, n_max - i)
        for k in range(top + 1):
            bk = b[k]
            if bk:
                out[i + k] += ai * bk
    return out


def series_inv(a, n_max):
    """Inverse of a power series with a[0] == 1."""
    assert a[0] == 1
    inv = [0] * (n_max + 1)
    inv[0] = 1
    for n in range(1, n_max + 1):
        acc = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            if a[k]:
                acc += a[k] * inv[n - k]
        inv[n] = -acc
    return inv


def j_series(n_max):
    """Laurent coefficients of j: returns list jc with jc[i] = [q^(i-1)] j."""
    sig = sigma3_table(n_max + 1)
    e4 = [1] + [240 * sig[n] for n in range(1, n_max + 2)]
    # eta(tau)^3 = q^(1/8) * sum_{k>=0} (-1)^k (2k+1) q^(k(k+1)/2)
    f3 = [0] * (n_max + 2)
    k = 0
    while k * (k + 1) // 2 <= n_max + 1:
        f3[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    d = f3
    for _ in range(3):  # f3^8 = ((f3^2)^2)^2
        d = series_mul(d, d, n_max + 1)
    e4c = series_mul(series_mul(e4, e4, n_max + 1), e4, n_max + 1)
    jc = series_mul(e4c, series_inv(d, n_max + 1), n_max + 1)
    assert jc[: len(J_HEAD)] == J_HEAD, "j-expansion self-check failed"
    return jc  # jc[i] is the coefficient of q^(i-1)


class Laurent:
    """Finite Laurent series: coefficient of q^(off + i) is c[i]."""

    def __init__(self, off, c):
        self.off = off
        self.c = list(c)

    @staticmethod
    def zero():
        return Laurent(0, [])

    def coeff(self, e):
        i = e - self.off
        return self.c[i] if 0 <= i < len(self.c) else 0

    def low(self):
        for i, v in enumerate(self.c):
            if v:
                return self.off + i
        return None

    def add_scaled(self, other, scale, e_min, e_max):
        out_off = e_min
        out = [self.coeff(e) for e in range(e_min, e_max + 1)]
        for i, v in enumerate(other.c):
            e = other.off + i
            if v and e_min <= e <= e_max:
                out[e - out_off] += scale * v
        return Laurent(out_off, out)

    def mul(self, other, e_max):
        out_off = self.off + other.off
        out = [0] * (e_max - out_off + 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            ea = self.off + i
            if ea > e_max:
                break
            for k, b in enumerate(other.c):
                e = ea + other.off + k
                if e > e_max:
                    break
                if b:
                    out[e - out_off] += a * b
        return Laurent(out_off, out)


def phi_table(ell, jc):
    """Coefficient map {(dx,dy): c} of Phi_ell, dx >= dy."""
    hi = ell + 5  # working precision; only exponents <= 2 are read at the end
    e_hi = ell * hi  # q-precision needed from j^m
    # Each multiplication by j (pole at q^-1) costs one exponent of trusted
    # precision, so build the powers with ell+1 exponents of headroom.
    e_full = e_hi + ell + 2
    jp = [None, Laurent(-1, jc[: e_full + 2])]
    for m in range(2, ell + 2):
        jp.append(jp[m - 1].mul(jp[1], e_full))

    # Power sums of the ell conjugates j((tau+k)/ell):
    # summing over k keeps only exponents divisible by ell (times ell).
    lo = -2
    ps = [None]
    for m in range(1, ell + 1):
        coeffs = [ell * jp[m].coeff(ell * e) for e in range(lo, hi + 1)]
        ps.append(Laurent(lo, coeffs))

    # Newton's identities: k*e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    esym = [Laurent(0, [1])]
    for k in range(1, ell + 1):
        acc = Laurent.zero()
        for i in range(1, k + 1):
            term = esym[k - i].mul(ps[i], hi)
            acc = acc.add_scaled(term, (-1) ** (i - 1), lo * 2, hi)
        coeffs = []
        for idx, v in enumerate(acc.c):
            assert v % k == 0, "Newton identity divisibility failed"
            coeffs.append(v // k)
        esym.append(Laurent(acc.off, coeffs))

    # Fold in the remaining conjugate j(ell*tau), a series in q^ell whose
    # terms above q^3 cannot reach the [-(ell+1), 2] window.
    big = [None] * (ell + 2)
    big[0] = Laurent(0, [1])
    for i in range(1, ell + 2):
        acc = esym[i] if i <= ell else Laurent.zero()
        prev = esym[i - 1]
        d = 0
        while ell * (d - 1) <= 3:
            shifted = Laurent(prev.off + ell * (d - 1), prev.c)
            acc = acc.add_scaled(shifted, jc[d], -(ell + 1), 2)
            d += 1
        big[i] = acc

    # Phi(X, j) = sum_i (-1)^i big[i] X^(ell+1-i); peel each coefficient
    # into an integer polynomial in j.
    table = {}
    for i in range(ell + 2):
        xdeg = ell + 1 - i
        ser = big[i] if i % 2 == 0 else big[i].add_scaled(big[i], -2, -(ell + 1), 2)
        mono = {}
        while True:
            low = ser.low()
            if low is None or low >= 0:
                break
            n = -low
            c = ser.coeff(low)
            assert n <= ell + 1
            mono[n] = c
            ser = ser.add_scaled(jp[n], -c, -(ell + 1), 2)
        c0 = ser.coeff(0)
        if c0:
            mono[0] = c0
        assert ser.coeff(1) == 0 and ser.coeff(2) == 0, "nonzero tail after peeling"
        for ydeg, c in mono.items():
            if c:
                table[(xdeg, ydeg)] = c

    # Validation: symmetry, leading structure, Kronecker congruence mod ell.
    for (a, b), c in list(table.items()):
        assert table.get((b, a), 0) == c, f"asymmetry at {(a, b)}"
    assert table[(ell + 1, 0)] == 1
    assert table[(ell, ell)] == -1
    assert (ell + 1, ell + 1) not in table
    kron = {(ell + 1, 0): 1, (0, ell + 1): 1, (ell, ell): -1, (1, 1): -1}
    for a in range(ell + 2):
        for b in range(ell + 2):
            assert (table.get((a, b), 0) - kron.get((a, b), 0)) % ell == 0, \
                f"Kronecker congruence fails at {(a, b)}"
    if ell == 2:
        got = {k: v for k, v in table.items() if k[0] >= k[1]}
        assert got == PHI2_EXPECTED, "Phi_2 does not match the reference table"

    return {k: v for k, v in table.items() if k[0] >= k[1]}


def write_table(path, ell, table):
    lines = [f"# classical modular polynomial, level {ell}", f"ell {ell}"]
    for (dx, dy) in sorted(table, reverse=True):
        lines.append(f"{dx} {dy} {table[(dx, dy)]}")
    path.write_text("\n".join(lines) + "\n")


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data/modpoly")
    outdir.mkdir(parents=True, exist_ok=True)
    n_max = max(LEVELS) * (max(LEVELS) + 5) + max(LEVELS) + 3
    jc = j_series(n_max)
    for ell in LEVELS:
        table = phi_table(ell, jc)
        write_table(outdir / f"phi{ell}.txt", ell, table)
        print(f"phi{ell}: {len(table)} stored coefficients, "
              f"max digits {max(len(str(abs(c))) for c in table.values())}")


if __name__ == "__main__":
    main()
