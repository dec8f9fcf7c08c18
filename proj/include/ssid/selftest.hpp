#pragma once

// Shared verification suites: the oracle-equivalence sweep (every decider
// agrees with the Hasse-invariant oracle on exhaustive small inputs) and the
// volcano-structure sweep (degree/level clauses, norm equation, depth bound,
// path dichotomy on exhaustive small graphs).  The CLI selftest subcommand
// runs both at a quick scale; the acceptance suite runs them at full range.

#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ssid/classify.hpp"
#include "ssid/volcano.hpp"

namespace ssid {

struct SuiteOutcome {
    bool pass = true;
    long checks = 0;
    std::vector<std::string> failures;

    void note(const std::string& what) {
        pass = false;
        if (failures.size() < 32) failures.push_back(what);
    }
};

inline std::vector<unsigned long> primes_in(unsigned long lo, unsigned long hi) {
    std::vector<unsigned long> out;
    Integer p(lo - 1);
    while (true) {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        if (p > hi) break;
        out.push_back(p.get_ui());
    }
    return out;
}

// Every decider against the ground-truth oracle: all j in F_p for
// 3 < p < max_p_exclusive, all j in F_{p^2} for 3 < p <= fp2_max_p.
inline SuiteOutcome oracle_equivalence_suite(unsigned long max_p_exclusive,
                                             unsigned long fp2_max_p,
                                             bool with_monte_carlo = false,
                                             const std::string& dir = "") {
    SuiteOutcome out;
    ClassifierConfig cfg;
    cfg.seed = 1;

    auto check_one = [&](const Field& F, const Fq& j, uint64_t mc_seed) {
        Curve E = curve_from_j(F, j);
        bool truth = oracle_hasse(E);
        auto expect = [&](const char* name, const Verdict& v) {
            ++out.checks;
            bool got = v.result == Verdict::Result::Supersingular;
            if (v.result == Verdict::Result::ProbablySupersingular ||
                got != truth)
                out.note(std::string(name) + " disagrees with the oracle at p=" +
                         F.p().get_str() + " j=" + F.to_string(j));
        };
        expect("identify", identify(E, cfg));
        if (F.in_prime_field(j)) expect("identify_fp_shortcut", identify_fp_shortcut(E, cfg));
        if (!F.is_zero(j) && j != F.elt(1728))
            expect("prove_modpoly", prove_modpoly(F, j, dir));
        if (with_monte_carlo && truth) {
            // One-sided error: a supersingular curve can never be called
            // ordinary.
            ClassifierConfig mc = cfg;
            mc.seed = mc_seed;
            mc.mc_repetitions = 1;
            ++out.checks;
            if (monte_carlo(E, mc).result == Verdict::Result::Ordinary)
                out.note("monte_carlo returned ordinary on a supersingular curve at p=" +
                         F.p().get_str() + " j=" + F.to_string(j));
        }
    };

    for (unsigned long p : primes_in(5, max_p_exclusive - 1)) {
        Field Fp{Integer(p)};
        for (unsigned long j = 0; j < p; ++j) check_one(Fp, Fp.elt(j), p * 1000 + j);
    }
    for (unsigned long p : primes_in(5, fp2_max_p)) {
        Field F2 = Field::quadratic_canonical(Integer(p));
        for (unsigned long i = 0; i < p * p; ++i)
            check_one(F2, F2.elt_at(i), p * 100000 + i);
    }
    return out;
}

// Legendre-sum oracle against the Hasse-invariant oracle on the Legendre
// curve y^2 = x(x-1)(x-lambda) for every valid lambda in F_p, p < max_p.
inline SuiteOutcome legendre_oracle_suite(unsigned long max_p_exclusive) {
    SuiteOutcome out;
    for (unsigned long p : primes_in(5, max_p_exclusive - 1)) {
        Field Fp{Integer(p)};
        for (unsigned long l = 2; l < p; ++l) {
            Fq lambda = Fp.elt(l);
            // x(x-1)(x-lambda) = x^3 - (1+lambda)x^2 + lambda x
            bool hasse = oracle_hasse_cubic(Fp, Fp.neg(Fp.add(Fp.one(), lambda)), lambda,
                                            Fp.zero());
            ++out.checks;
            if (oracle_legendre(Fp, lambda) != hasse)
                out.note("legendre oracle disagreement at p=" + std::to_string(p) +
                         " lambda=" + std::to_string(l));
        }
    }
    return out;
}

// Structure of every ordinary component of G_ell(F_q) for ell in {2, 3} and
// all prime powers q <= max_q (both q = p and q = p^2), plus the uniqueness
// and regularity of the supersingular component over F_{p^2} and the path
// dichotomy.
inline SuiteOutcome volcano_structure_suite(unsigned long max_q, const std::string& dir = "") {
    SuiteOutcome out;

    auto run_field = [&](const Field& F) {
        std::optional<std::vector<char>> classes; // shared across ell
        for (int ell : {2, 3}) {
            if (Integer(ell) == F.p()) continue;
            IsogenyGraph g = build_graph(F, ell, dir);
            if (!classes) classes = classify_vertices(g);
            const std::vector<char>& ss = *classes;
            auto comps = connected_components(g);

            // Degree bound.
            for (uint32_t v = 0; v < g.q; ++v) {
                ++out.checks;
                if (g.adj[v].size() > static_cast<size_t>(ell + 1))
                    out.note("degree above ell+1 at q=" + F.q().get_str());
            }
            // Edges stay within one class.
            for (uint32_t v = 0; v < g.q; ++v)
                for (uint32_t w : g.adj[v]) {
                    ++out.checks;
                    if (ss[v] != ss[w])
                        out.note("mixed-class edge at q=" + F.q().get_str());
                }

            long ss_components = 0;
            for (const auto& comp : comps) {
                if (ss[comp.front()]) {
                    ++ss_components;
                    if (F.degree() == 2) {
                        for (uint32_t v : comp) {
                            ++out.checks;
                            if (g.adj[v].size() != static_cast<size_t>(ell + 1))
                                out.note("supersingular component not (ell+1)-regular at p=" +
                                         F.p().get_str());
                        }
                    }
                    continue;
                }
                VolcanoProfile prof = profile_component(g, g.vertex_value(comp.front()), &comp);
                VolcanoReport rep = verify_volcano(g, prof);
                ++out.checks;
                if (!rep.pass()) {
                    std::ostringstream os;
                    os << "volcano clauses failed at q=" << F.q() << " ell=" << ell
                       << " component of j=" << g.vertex_name(comp.front())
                       << " [i:" << rep.degree_iff_above_floor.pass
                       << " ii:" << rep.surface_edges.pass << " iii:" << rep.middle_split.pass
                       << " iv:" << rep.floor_single_edge.pass << " eq1:" << rep.norm_equation
                       << " eq2:" << rep.depth_bound << " sizes:" << rep.level_sizes << "]";
                    out.note(os.str());
                }
            }
            if (F.degree() == 2) {
                ++out.checks;
                if (ss_components != 1)
                    out.note("expected exactly one supersingular component at p=" +
                             F.p().get_str() + " ell=" + std::to_string(ell) + ", found " +
                             std::to_string(ss_components));
            }

            // Path dichotomy.
            long m = walk_rounds(F.p());
            long k_bound = 0; // largest k with ell^(2(k-1)) < 4q
            {
                Integer pw = 1;
                while (pw < 4 * F.q()) {
                    pw *= ell * ell;
                    ++k_bound;
                }
            }
            EdgeTransitions engine(g);
            for (uint32_t v = 0; v < g.q; ++v) {
                if (g.adj[v].size() != static_cast<size_t>(ell + 1)) continue;
                if (!ss[v]) {
                    // count with edge multiplicity
                    long early = 0;
                    for (uint32_t w : g.adj[v])
                        if (engine.first_empty(v, w, k_bound)) ++early;
                    ++out.checks;
                    if (early < ell - 1)
                        out.note("ordinary vertex missing early-dead edges at q=" +
                                 F.q().get_str() + " j=" + g.vertex_name(v));
                } else if (F.degree() == 2) {
                    for (uint32_t w : g.adj[v]) {
                        ++out.checks;
                        if (engine.first_empty(v, w, 2 * m))
                            out.note("supersingular path died at q=" + F.q().get_str() +
                                     " j=" + g.vertex_name(v));
                    }
                }
            }
        }
    };

    for (unsigned long p : primes_in(5, max_q)) run_field(Field(Integer(p)));
    for (unsigned long p : primes_in(5, max_q)) {
        if (static_cast<unsigned long long>(p) * p > max_q) break;
        run_field(Field::quadratic_canonical(Integer(p)));
    }
    return out;
}

} // namespace ssid
