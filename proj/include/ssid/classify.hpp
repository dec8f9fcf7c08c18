#pragma once

// The supersingularity deciders.
//
//   oracle_hasse      exponential-time ground truth (Hasse invariant: the
//                     x^(p-1) coefficient of f^((p-1)/2) vanishes)
//   oracle_legendre   same criterion for Legendre curves, as a binomial sum
//   monte_carlo       one-sided randomized test via (p +- 1)P = 0
//   prove_modpoly     deterministic proof: Phi_ell(j, X) splits completely
//                     over F_{p^2} for enough small ell
//   identify          the 2-isogeny-graph walk: proves either verdict by
//                     walking three non-backtracking paths of length
//                     floor(log2 p) + 2; an ordinary walk falls off the
//                     volcano floor, a supersingular one cannot
//   identify_fp_shortcut
//                     same contract for curves with j in F_p: walk in the
//                     prime-field graph until a vertex with a single
//                     F_p-edge appears, then extend one conjugate path
//
// Deterministic mode fixes every choice with the canonical element order
// and caller-supplied non-residues; Las Vegas mode samples non-residues and
// walk branches from the seed.  The verdict is the same either way.

#include <optional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "ssid/curve.hpp"
#include "ssid/field.hpp"
#include "ssid/modpoly.hpp"
#include "ssid/roots.hpp"

namespace ssid {

struct Verdict {
    enum class Result { Ordinary, Supersingular, ProbablySupersingular };
    enum class MethodTag { Oracle, MonteCarlo, ModPoly, Volcano };

    Result result = Result::Ordinary;
    MethodTag method = MethodTag::Volcano;
    long steps = 0;
    std::string terminated_at;
    std::optional<uint64_t> seed;

    bool proven() const { return result != Result::ProbablySupersingular; }
    bool supersingular_ish() const { return result != Result::Ordinary; }
};

inline const char* to_string(Verdict::Result r) {
    switch (r) {
    case Verdict::Result::Ordinary: return "ordinary";
    case Verdict::Result::Supersingular: return "supersingular";
    case Verdict::Result::ProbablySupersingular: return "probably_supersingular";
    }
    return "?";
}

inline const char* to_string(Verdict::MethodTag m) {
    switch (m) {
    case Verdict::MethodTag::Oracle: return "oracle";
    case Verdict::MethodTag::MonteCarlo: return "monte_carlo";
    case Verdict::MethodTag::ModPoly: return "modpoly";
    case Verdict::MethodTag::Volcano: return "volcano";
    }
    return "?";
}

struct ClassifierConfig {
    enum class Mode { Deterministic, LasVegas };

    Mode mode = Mode::LasVegas;
    std::optional<Fq> qnr; // quadratic non-residue of F_p(t); deterministic mode
    std::optional<Fq> cnr; // cubic non-residue of F_p(t); deterministic mode
    uint64_t seed = 0;
    int mc_repetitions = 2;
};

// ---------------------------------------------------------------------------
// Exponential-time oracles (desk scale: p <= 2^20).

inline constexpr unsigned long kOracleMaxP = 1ul << 20;

// Supersingularity of y^2 = x^3 + a2 x^2 + a1 x + a0: the coefficient of
// x^(p-1) in f^((p-1)/2) vanishes.  f^m is built by m sparse multiplications,
// keeping only the coefficients that can still reach x^(p-1).
inline bool oracle_hasse_cubic(const Field& F, const Fq& a2, const Fq& a1, const Fq& a0) {
    if (F.p() > kOracleMaxP)
        fail(Errc::PrimeTooLargeForOracle, "Hasse-invariant oracle is exponential in log p");
    unsigned long p = F.p().get_ui();
    unsigned long m = (p - 1) / 2;
    unsigned long target = p - 1;

    std::vector<Fq> h{F.one()};
    for (unsigned long s = 1; s <= m; ++s) {
        unsigned long hi = std::min(3 * s, target);
        unsigned long rem = m - s;
        unsigned long lo = target > 3 * rem ? target - 3 * rem : 0;
        unsigned long src_lo = lo >= 3 ? lo - 3 : 0;
        std::vector<Fq> next(hi + 1, F.zero());
        unsigned long src_hi = std::min<unsigned long>(h.size() - 1, hi);
        for (unsigned long i = src_lo; i <= src_hi; ++i) {
            if (F.is_zero(h[i])) continue;
            if (i + 3 <= hi) next[i + 3] = F.add(next[i + 3], h[i]);
            if (i + 2 <= hi && !F.is_zero(a2)) next[i + 2] = F.add(next[i + 2], F.mul(a2, h[i]));
            if (i + 1 <= hi) next[i + 1] = F.add(next[i + 1], F.mul(a1, h[i]));
            next[i] = F.add(next[i], F.mul(a0, h[i]));
        }
        h = std::move(next);
    }
    return h.size() > target && F.is_zero(h[target]);
}

inline bool oracle_hasse(const Curve& E) {
    return oracle_hasse_cubic(E.F, E.F.zero(), E.A, E.B);
}

// Legendre curve y^2 = x(x-1)(x-lambda): supersingular iff
// sum_{i<=m} binom(m,i)^2 lambda^i = 0, m = (p-1)/2.
inline bool oracle_legendre(const Field& F, const Fq& lambda) {
    if (F.is_zero(lambda) || lambda == F.one())
        fail(Errc::BadLambda, "lambda must avoid 0 and 1");
    if (F.p() > kOracleMaxP)
        fail(Errc::PrimeTooLargeForOracle, "Legendre oracle is exponential in log p");
    const Integer& p = F.p();
    Integer m = (p - 1) / 2;
    Integer binom = 1;
    Fq lpow = F.one();
    Fq acc = F.one();
    for (Integer i = 1; i <= m; ++i) {
        Integer inv_i;
        mpz_invert(inv_i.get_mpz_t(), i.get_mpz_t(), p.get_mpz_t());
        binom = binom * ((m - i + 1) % p) % p * inv_i % p;
        lpow = F.mul(lpow, lambda);
        acc = F.add(acc, F.mul(F.elt(binom * binom), lpow));
    }
    return F.is_zero(acc);
}

// ---------------------------------------------------------------------------
// Monte Carlo (one-sided: "ordinary" is a proof).

inline double mc_false_positive_bound(double q) {
    double s = std::sqrt(q);
    return 8.0 * s / ((s - 1.0) * (s - 1.0));
}

inline bool mc_single_trial_passes(const Curve& E, const Point& P) {
    const Field& F = E.F;
    const Integer& p = F.p();
    if (F.degree() == 1) {
        return scalar_mul(E, p + 1, P).inf;
    }
    Point t = scalar_mul(E, p - 1, P);
    if (t.inf) return true;
    Point twice = detail::add_unchecked(E, P, P);
    return detail::add_unchecked(E, t, twice).inf; // (p+1)P
}

inline Verdict monte_carlo(const Curve& E, const ClassifierConfig& config) {
    Verdict v;
    v.method = Verdict::MethodTag::MonteCarlo;
    v.seed = config.seed;
    Rng rng(config.seed);
    for (int rep = 1; rep <= config.mc_repetitions; ++rep) {
        Point P = random_point(E, rng);
        if (!mc_single_trial_passes(E, P)) {
            v.result = Verdict::Result::Ordinary;
            v.steps = rep;
            v.terminated_at = "rep:" + std::to_string(rep);
            return v;
        }
    }
    v.result = Verdict::Result::ProbablySupersingular;
    v.steps = config.mc_repetitions;
    v.terminated_at = "complete";
    return v;
}

// ---------------------------------------------------------------------------
// Modular polynomial prover.

namespace detail {

inline const ModularPolynomial& cached_modpoly(int ell, const std::string& dir) {
    if (ell == 2) return ModularPolynomial::phi2();
    static std::map<std::pair<std::string, int>, ModularPolynomial> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dir, ell);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, ModularPolynomial::load(ell, dir)).first;
    return it->second;
}

} // namespace detail

// Smallest primes ell != p whose product exceeds 2p.
inline std::vector<int> modpoly_prime_set(const Integer& p) {
    std::vector<int> out;
    Integer bound = 2 * p;
    Integer product = 1;
    Integer ell = 2;
    while (product <= bound) {
        if (ell != p) {
            out.push_back(static_cast<int>(ell.get_ui()));
            product *= ell;
        }
        mpz_nextprime(ell.get_mpz_t(), ell.get_mpz_t());
    }
    return out;
}

// Proof by complete splitting of Phi_ell(j, X) over F_{p^2} for every ell in
// the prime set.  j = 0 and j = 1728 are excluded (handled by congruence in
// the dispatcher).
inline Verdict prove_modpoly(const Field& F, const Fq& j, const std::string& dir = "") {
    Verdict v;
    v.method = Verdict::MethodTag::ModPoly;
    if (F.is_zero(j) || j == F.elt(1728))
        fail(Errc::ExcludedJInvariant, "j in {0, 1728}: decide by the congruence rule");
    std::string d = modpoly_dir(dir);
    std::vector<int> primes = modpoly_prime_set(F.p());

    std::optional<Field> prime_field;
    bool over_fp = F.in_prime_field(j);
    if (over_fp && F.degree() == 2) prime_field.emplace(F.p());
    const Field& Fwork = over_fp ? (F.degree() == 1 ? F : *prime_field) : F;
    Fq jwork = over_fp ? Fwork.elt(j.c0) : j;

    long tested = 0;
    for (int ell : primes) {
        const ModularPolynomial& phi = detail::cached_modpoly(ell, d);
        UniPoly f = phi.instantiate(Fwork, jwork);
        bool splits = over_fp ? splits_over_quadratic_extension(Fwork, f)
                              : splits_completely(Fwork, f);
        ++tested;
        if (!splits) {
            v.result = Verdict::Result::Ordinary;
            v.steps = tested;
            v.terminated_at = "ell:" + std::to_string(ell);
            return v;
        }
    }
    v.result = Verdict::Result::Supersingular;
    v.steps = tested;
    v.terminated_at = "complete";
    return v;
}

// ---------------------------------------------------------------------------
// The isogeny-graph walk.

namespace detail {

struct WalkContexts {
    Field F2;
    SylowContext ctx2;
    SylowContext ctx3;
};

// Extension field and Sylow contexts for the walk.  Deterministic mode uses
// the canonical extension basis and caller-supplied non-residues; Las Vegas
// mode samples both from the seed stream.
inline WalkContexts make_walk_contexts(const Field& base, const ClassifierConfig& config,
                                       Rng& rng) {
    bool det = config.mode == ClassifierConfig::Mode::Deterministic;
    Field F2 = base.degree() == 2
                   ? base
                   : (det ? Field::quadratic_canonical(base.p())
                          : Field::quadratic_sampled(base.p(), rng));
    if (det) {
        if (!config.qnr || !config.cnr)
            fail(Errc::MissingNonResidue,
                 "deterministic mode needs a quadratic and a cubic non-residue");
        Fq qnr = F2.elt(config.qnr->c0, config.qnr->c1);
        Fq cnr = F2.elt(config.cnr->c0, config.cnr->c1);
        return WalkContexts{F2, make_sylow_context(F2, 2, qnr), make_sylow_context(F2, 3, cnr)};
    }
    SylowContext c2 = make_sylow_context(F2, 2, F2.find_nonresidue(2, rng));
    SylowContext c3 = make_sylow_context(F2, 3, F2.find_nonresidue(3, rng));
    return WalkContexts{F2, c2, c3};
}

// One path step: divide out the back-edge and solve the quadratic.
// Returns the continuation multiset (empty = the path fell off the graph).
inline std::vector<Fq> walk_continuations(const Field& F, const SylowContext& ctx2,
                                          const Fq& cur, const Fq& prev) {
    UniPoly cubic = ModularPolynomial::phi2().instantiate(F, cur);
    auto [quad, rem] = poly_div_linear(F, cubic, prev);
    if (!F.is_zero(rem))
        fail(Errc::InvariantViolation, "previous vertex is not a root of Phi_2(cur, X)");
    return solve_quadratic(F, ctx2, quad.c[1], quad.c[0]);
}

inline Fq pick_root(const std::vector<Fq>& roots, const ClassifierConfig& config, Rng& rng) {
    if (config.mode == ClassifierConfig::Mode::Deterministic) return roots.front();
    return roots[rng.below_u64(roots.size())];
}

// Extend a single path for `rounds` steps; returns the 1-based round at
// which it died, or nullopt if it survived all of them.
inline std::optional<long> walk_single_path(const Field& F, const SylowContext& ctx2, Fq prev,
                                            Fq cur, long rounds, const ClassifierConfig& config,
                                            Rng& rng) {
    for (long k = 1; k <= rounds; ++k) {
        auto roots = walk_continuations(F, ctx2, cur, prev);
        if (roots.empty()) return k;
        Fq nxt = pick_root(roots, config, rng);
        prev = cur;
        cur = nxt;
    }
    return std::nullopt;
}

} // namespace detail

// floor(log2 p) + 1
inline long walk_rounds(const Integer& p) {
    return static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2));
}

// The graph walk over F_{p^2}.  Three paths leave j(E) along the roots of
// Phi_2(j(E), X); each is extended m = floor(log2 p) + 1 times without
// backtracking.  Any failure proves the curve ordinary; full survival proves
// it supersingular.
inline Verdict identify(const Curve& E, const ClassifierConfig& config) {
    Verdict v;
    v.method = Verdict::MethodTag::Volcano;
    if (config.mode == ClassifierConfig::Mode::LasVegas) v.seed = config.seed;

    Rng rng(config.seed);
    detail::WalkContexts W = detail::make_walk_contexts(E.F, config, rng);
    const Field& F2 = W.F2;

    Fq jbase = j_invariant(E);
    Fq j = E.F.degree() == 2 ? jbase : F2.elt(jbase.c0);

    UniPoly cubic = ModularPolynomial::phi2().instantiate(F2, j);
    std::vector<Fq> roots3 = solve_cubic(F2, W.ctx2, &W.ctx3, cubic.c[2], cubic.c[1], cubic.c[0]);
    if (roots3.size() < 3) {
        v.result = Verdict::Result::Ordinary;
        v.steps = 0;
        v.terminated_at = "step3";
        return v;
    }

    struct PathState {
        Fq prev, cur;
    };
    std::vector<PathState> paths{{j, roots3[0]}, {j, roots3[1]}, {j, roots3[2]}};

    long m = walk_rounds(E.F.p());
    for (long k = 1; k <= m; ++k) {
        for (auto& path : paths) {
            auto roots = detail::walk_continuations(F2, W.ctx2, path.cur, path.prev);
            if (roots.empty()) {
                v.result = Verdict::Result::Ordinary;
                v.steps = k;
                v.terminated_at = "step5:" + std::to_string(k);
                return v;
            }
            Fq nxt = detail::pick_root(roots, config, rng);
            path.prev = path.cur;
            path.cur = nxt;
        }
    }
    v.result = Verdict::Result::Supersingular;
    v.steps = m + 1; // path length, initial edge included
    v.terminated_at = "complete";
    return v;
}

// Prime-field shortcut for curves with j(E) in F_p.  Walk three paths in the
// F_p graph; a path whose quadratic has no F_p root has reached a vertex
// with a single F_p-edge, and its two conjugate edges descend whenever the
// curve is ordinary, so extending one conjugate path settles the verdict.
// Falls back to the full walk if no such vertex appears within m rounds.
inline Verdict identify_fp_shortcut(const Curve& E, const ClassifierConfig& config) {
    Fq jE = j_invariant(E);
    if (!E.F.in_prime_field(jE))
        fail(Errc::NotDefinedOverPrimeField, "j(E) does not lie in F_p");

    Verdict v;
    v.method = Verdict::MethodTag::Volcano;
    if (config.mode == ClassifierConfig::Mode::LasVegas) v.seed = config.seed;

    const Integer& p = E.F.p();
    Rng rng(config.seed);
    detail::WalkContexts W = detail::make_walk_contexts(E.F, config, rng);
    const Field& F2 = W.F2;
    Field Fp = E.F.degree() == 1 ? E.F : Field(p);

    SylowContext ctx2p;
    if (config.mode == ClassifierConfig::Mode::Deterministic) {
        if (!config.qnr)
            fail(Errc::MissingNonResidue, "deterministic mode needs a quadratic non-residue");
        // The norm maps non-residues of F_{p^2} onto non-residues of F_p.
        Fq norm = F2.pow(F2.elt(config.qnr->c0, config.qnr->c1), p + 1);
        ctx2p = make_sylow_context(Fp, 2, Fp.elt(norm.c0));
    } else {
        ctx2p = make_sylow_context(Fp, 2, Fp.find_nonresidue(2, rng));
    }

    long m = walk_rounds(p);
    Fq j2 = F2.elt(jE.c0);

    // Step 3 runs over the extension so the root count matches the full
    // walk; the F_p / conjugate partition seeds the prime-field paths.
    UniPoly cubic = ModularPolynomial::phi2().instantiate(F2, j2);
    std::vector<Fq> roots3 = solve_cubic(F2, W.ctx2, &W.ctx3, cubic.c[2], cubic.c[1], cubic.c[0]);
    if (roots3.size() < 3) {
        v.result = Verdict::Result::Ordinary;
        v.steps = 0;
        v.terminated_at = "step3";
        return v;
    }

    std::vector<Fq> fp_roots, ext_roots;
    for (const Fq& r : roots3)
        (F2.in_prime_field(r) ? fp_roots : ext_roots).push_back(r);

    auto extend_conjugate = [&](const Fq& from, const std::vector<Fq>& pair,
                                long rounds_done) -> Verdict {
        Fq rho = detail::pick_root(pair, config, rng);
        auto died = detail::walk_single_path(F2, W.ctx2, from, rho, m, config, rng);
        if (died) {
            v.result = Verdict::Result::Ordinary;
            v.steps = rounds_done + *died;
            v.terminated_at = "step5:" + std::to_string(rounds_done + *died);
        } else {
            v.result = Verdict::Result::Supersingular;
            v.steps = rounds_done + m + 1;
            v.terminated_at = "complete";
        }
        return v;
    };

    if (fp_roots.size() != 3) {
        if (fp_roots.size() != 1 || ext_roots.size() != 2)
            fail(Errc::InvariantViolation, "cubic over F_p cannot have two rational roots");
        // j(E) itself has a single F_p-edge.
        return extend_conjugate(j2, ext_roots, 0);
    }

    struct PathState {
        Fq prev, cur;
    };
    Fq jp = Fp.elt(jE.c0);
    std::vector<PathState> paths;
    for (const Fq& r : fp_roots) paths.push_back({jp, Fp.elt(r.c0)});

    for (long k = 1; k <= m; ++k) {
        for (auto& path : paths) {
            UniPoly cb = ModularPolynomial::phi2().instantiate(Fp, path.cur);
            auto [quad, rem] = poly_div_linear(Fp, cb, path.prev);
            if (!Fp.is_zero(rem))
                fail(Errc::InvariantViolation, "previous vertex is not a root of Phi_2(cur, X)");
            auto roots = solve_quadratic(Fp, ctx2p, quad.c[1], quad.c[0]);
            if (roots.empty()) {
                // Vertex of F_p-degree 1: the two conjugate continuations.
                std::vector<Fq> pair =
                    solve_quadratic(F2, W.ctx2, F2.elt(quad.c[1].c0), F2.elt(quad.c[0].c0));
                if (pair.size() != 2)
                    fail(Errc::InvariantViolation, "conjugate quadratic must split over F_{p^2}");
                return extend_conjugate(F2.elt(path.cur.c0), pair, k);
            }
            Fq nxt = detail::pick_root(roots, config, rng);
            path.prev = path.cur;
            path.cur = nxt;
        }
    }
    // No degree-1 vertex surfaced; decide with the full walk.
    return identify(E, config);
}

// ---------------------------------------------------------------------------
// Dispatch facade.

enum class Method { Auto, Volcano, MonteCarlo, ModPoly, Oracle };

inline Method method_from_name(const std::string& name) {
    if (name == "auto") return Method::Auto;
    if (name == "volcano") return Method::Volcano;
    if (name == "mc") return Method::MonteCarlo;
    if (name == "modpoly") return Method::ModPoly;
    if (name == "oracle") return Method::Oracle;
    fail(Errc::BadInput, "unknown method: " + name);
}

// j = 0 is supersingular iff p != 1 mod 3; j = 1728 iff p != 1 mod 4.
inline bool supersingular_by_congruence(const Integer& p, bool j_is_zero) {
    return j_is_zero ? (p % 3 != 1) : (p % 4 != 1);
}

inline Verdict classify_curve(const Curve& E, Method method, const ClassifierConfig& config,
                              const std::string& dir = "") {
    Fq j = j_invariant(E);
    switch (method) {
    case Method::Auto:
        if (E.F.in_prime_field(j)) return identify_fp_shortcut(E, config);
        return identify(E, config);
    case Method::Volcano:
        return identify(E, config);
    case Method::MonteCarlo:
        return monte_carlo(E, config);
    case Method::Oracle: {
        Verdict v;
        v.method = Verdict::MethodTag::Oracle;
        v.result = oracle_hasse(E) ? Verdict::Result::Supersingular : Verdict::Result::Ordinary;
        v.terminated_at = "hasse";
        return v;
    }
    case Method::ModPoly: {
        bool zero = E.F.is_zero(j);
        if (zero || j == E.F.elt(1728)) {
            Verdict v;
            v.method = Verdict::MethodTag::ModPoly;
            v.result = supersingular_by_congruence(E.F.p(), zero)
                           ? Verdict::Result::Supersingular
                           : Verdict::Result::Ordinary;
            v.terminated_at = "congruence";
            return v;
        }
        return prove_modpoly(E.F, j, dir);
    }
    }
    fail(Errc::BadInput, "unknown method");
}

// Characteristic 2 and 3 never reach the field tower: in characteristic 3
// the short Weierstrass model forces j = 0, which is supersingular, and in
// characteristic 2 the model is always singular.
inline Verdict classify_small_char(const Integer& p, const Integer& A, const Integer& B) {
    if (p == 2)
        fail(Errc::SingularCurve, "y^2 = x^3 + Ax + B is singular in characteristic 2");
    if (p == 3) {
        if (A % 3 == 0)
            fail(Errc::SingularCurve, "x^3 + B is singular in characteristic 3");
        (void)B;
        Verdict v;
        v.method = Verdict::MethodTag::Volcano;
        v.result = Verdict::Result::Supersingular;
        v.terminated_at = "step2";
        return v;
    }
    fail(Errc::BadInput, "classify_small_char expects p in {2, 3}");
}

} // namespace ssid
