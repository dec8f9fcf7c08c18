#pragma once

// Desk-scale isogeny-graph laboratory.  build_graph() materializes
// G_ell(F_q) exhaustively (vertex set F_q, out-edges the root multiset of
// Phi_ell(j, X)); profile_component() recovers the level structure of an
// ordinary component from a point count and the norm equation
// 4q = t^2 - v^2 D; verify_volcano() checks the expected degree and edge
// pattern clause by clause and reports counterexample vertices instead of
// throwing.  reachable_set() implements non-backtracking path reachability.

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ssid/classify.hpp"
#include "ssid/curve.hpp"
#include "ssid/modpoly.hpp"

namespace ssid {

inline constexpr uint64_t kGraphMaxQ = 1000000;

struct IsogenyGraph {
    Field F;
    int ell;
    uint64_t q;
    std::vector<std::vector<uint32_t>> adj; // adj[v]: sorted out-neighbor multiset

    Fq vertex_value(uint32_t v) const { return F.elt_at(Integer(static_cast<unsigned long>(v))); }

    uint32_t vertex_index(const Fq& x) const {
        Integer i = F.degree() == 1 ? x.c0 : x.c0 * F.p() + x.c1;
        return static_cast<uint32_t>(i.get_ui());
    }

    std::string vertex_name(uint32_t v) const { return F.to_string(vertex_value(v)); }
};

// First element under the canonical order that fails the r-th residue test.
inline Fq smallest_nonresidue(const Field& F, unsigned long r) {
    for (Integer i = 1; i < F.q(); ++i) {
        Fq x = F.elt_at(i);
        if (!F.is_rth_residue(x, r)) return x;
    }
    fail(Errc::BadInput, "no non-residue exists");
}

inline IsogenyGraph build_graph(const Field& F, int ell, const std::string& dir = "") {
    if (F.q() > kGraphMaxQ)
        fail(Errc::FieldTooLarge, "exhaustive graphs are limited to q <= 10^6");
    if (Integer(ell) == F.p())
        fail(Errc::SameCharacteristic, "ell must differ from the characteristic");
    const ModularPolynomial& phi =
        ell == 2 ? ModularPolynomial::phi2() : ModularPolynomial::load(ell, modpoly_dir(dir));

    IsogenyGraph g{F, ell, F.q().get_ui(), {}};
    g.adj.resize(g.q);

    std::optional<SylowContext> ctx2, ctx3;
    if (ell == 2) {
        // Canonical contexts so repeated builds are identical.
        ctx2 = make_sylow_context(F, 2, smallest_nonresidue(F, 2));
        if ((F.q() - 1) % 3 == 0) ctx3 = make_sylow_context(F, 3, smallest_nonresidue(F, 3));
    }

    for (uint64_t v = 0; v < g.q; ++v) {
        Fq j = g.vertex_value(static_cast<uint32_t>(v));
        UniPoly f = phi.instantiate(F, j);
        std::vector<Fq> roots;
        if (ell == 2) {
            roots = solve_cubic(F, *ctx2, ctx3 ? &*ctx3 : nullptr, f.c[2], f.c[1], f.c[0]);
        } else {
            roots = poly_rational_roots(F, f);
        }
        std::vector<uint32_t> nbr;
        nbr.reserve(roots.size());
        for (const Fq& r : roots) nbr.push_back(g.vertex_index(r));
        std::sort(nbr.begin(), nbr.end());
        g.adj[v] = std::move(nbr);
    }
    return g;
}

// Proven ordinary/supersingular flag for every vertex (via the graph walk).
inline std::vector<char> classify_vertices(const IsogenyGraph& g) {
    ClassifierConfig cfg;
    cfg.seed = 1;
    std::vector<char> ss(g.q, 0);
    for (uint64_t v = 0; v < g.q; ++v) {
        Curve E = curve_from_j(g.F, g.vertex_value(static_cast<uint32_t>(v)));
        ss[v] = identify(E, cfg).result == Verdict::Result::Supersingular ? 1 : 0;
    }
    return ss;
}

// Undirected connected components, each sorted; singletons without edges
// are included.
inline std::vector<std::vector<uint32_t>> connected_components(const IsogenyGraph& g) {
    std::vector<uint32_t> parent(g.q);
    for (uint32_t v = 0; v < g.q; ++v) parent[v] = v;
    std::function<uint32_t(uint32_t)> find = [&](uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (uint32_t a = 0; a < g.q; ++a)
        for (uint32_t b : g.adj[a]) parent[find(a)] = find(b);
    std::map<uint32_t, std::vector<uint32_t>> buckets;
    for (uint32_t v = 0; v < g.q; ++v) buckets[find(v)].push_back(v);
    std::vector<std::vector<uint32_t>> out;
    out.reserve(buckets.size());
    for (auto& [root, members] : buckets) out.push_back(std::move(members));
    return out;
}

// Undirected connected component containing v0.
inline std::vector<uint32_t> component_of(const IsogenyGraph& g, uint32_t v0) {
    for (auto& comp : connected_components(g))
        for (uint32_t v : comp)
            if (v == v0) return comp;
    fail(Errc::BadInput, "vertex outside the graph");
}

struct VolcanoProfile {
    Integer t;  // |trace| of the witness curve
    Integer v;  // conductor-like factor in 4q = t^2 - v^2 D
    Integer D;  // fundamental discriminant (negative)
    unsigned d; // nu_ell(v): volcano depth
    uint32_t witness;
    std::vector<uint32_t> component;
    std::map<uint32_t, long> level_of;
};

namespace detail {

inline bool trace_is_supersingular(const Integer& t, const Integer& p, int degree) {
    if (degree == 1) return t == 0;
    Integer ta = t < 0 ? Integer(-t) : t;
    return ta == 0 || ta == p || ta == 2 * p;
}

// n = v^2 * m with m squarefree (trial division; n is desk-scale).
inline void split_square_part(const Integer& n, Integer& v, Integer& m) {
    v = 1;
    m = n;
    for (Integer d = 2; d * d <= m; ++d) {
        while (m % (d * d) == 0) {
            m /= d * d;
            v *= d;
        }
    }
}

} // namespace detail

// Level structure of the ordinary component containing j0.  The trace comes
// from a brute-force point count of a witness curve; j = 0 and 1728 are
// avoided as witnesses since their extra twists make the counted trace
// ambiguous.  Levels are assigned from the graph alone: the floor is the set
// of vertices of out-degree < ell+1, and level = d - distance_to_floor.
inline VolcanoProfile profile_component(const IsogenyGraph& g, const Fq& j0,
                                        const std::vector<uint32_t>* component_hint = nullptr) {
    const Field& F = g.F;
    uint32_t v0 = g.vertex_index(j0);
    VolcanoProfile prof;
    prof.component = component_hint ? *component_hint : component_of(g, v0);

    Fq j1728 = F.elt(1728);
    std::optional<uint32_t> witness;
    for (uint32_t v : prof.component) {
        Fq jv = g.vertex_value(v);
        if (!F.is_zero(jv) && jv != j1728) {
            witness = v;
            break;
        }
    }

    Integer vv;
    if (witness) {
        prof.witness = *witness;
        Curve E = curve_from_j(F, g.vertex_value(*witness));
        Integer N = count_points_bruteforce(E);
        Integer t = F.q() + 1 - N;
        if (detail::trace_is_supersingular(t, F.p(), F.degree()))
            fail(Errc::SupersingularVertex, "component is supersingular; no volcano profile");
        prof.t = t < 0 ? Integer(-t) : t;

        Integer n4 = 4 * F.q() - t * t;
        Integer m;
        detail::split_square_part(n4, vv, m);
        if (m % 4 == 3) {
            prof.D = -m;
        } else {
            prof.D = -4 * m;
            if (vv % 2 != 0)
                fail(Errc::InvariantViolation, "norm equation square part must be even here");
            vv /= 2;
        }
        prof.v = vv;
    } else {
        // The component is a lone CM vertex (j = 0 or 1728, self-loops at
        // most).  Its twists can carry different ell-valuations; the classes
        // visible here are exactly the ones with the fewest rational
        // ell-isogenies, so take the norm-equation representation with
        // minimal nu_ell(v).  D is forced: -3 at j = 0, -4 at j = 1728.
        prof.witness = v0;
        Fq jv = g.vertex_value(v0);
        bool zero = F.is_zero(jv);
        if (!zero && jv != j1728)
            fail(Errc::InvariantViolation, "witnessless component with a generic vertex");
        if (identify(curve_from_j(F, jv), ClassifierConfig{}).result !=
            Verdict::Result::Ordinary)
            fail(Errc::SupersingularVertex, "component is supersingular; no volcano profile");
        Integer absD = zero ? 3 : 4;
        std::optional<std::pair<Integer, Integer>> best; // (t, v), minimal nu_ell(v)
        unsigned best_nu = 0;
        for (Integer t = 0; t * t <= 4 * F.q(); ++t) {
            if (detail::trace_is_supersingular(t, F.p(), F.degree())) continue;
            Integer n = 4 * F.q() - t * t;
            if (n % absD != 0) continue;
            Integer m = n / absD;
            if (mpz_perfect_square_p(m.get_mpz_t()) == 0) continue;
            Integer w;
            mpz_sqrt(w.get_mpz_t(), m.get_mpz_t());
            unsigned nu = 0;
            Integer tmp = w;
            while (tmp != 0 && tmp % g.ell == 0) {
                tmp /= g.ell;
                ++nu;
            }
            if (!best || nu < best_nu) {
                best = {t, w};
                best_nu = nu;
            }
        }
        if (!best)
            fail(Errc::NoOrdinaryCurveWithJ, "no ordinary norm-equation representation");
        prof.t = best->first;
        prof.v = best->second;
        prof.D = -absD;
        vv = prof.v;
    }

    prof.d = 0;
    while (vv % g.ell == 0) {
        vv /= g.ell;
        ++prof.d;
    }

    // Multi-source BFS from the floor.
    std::unordered_map<uint32_t, long> dist;
    std::deque<uint32_t> queue;
    for (uint32_t v : prof.component) {
        if (g.adj[v].size() < static_cast<size_t>(g.ell + 1)) {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    if (queue.empty())
        fail(Errc::InvariantViolation, "ordinary component with no floor vertices");
    std::unordered_map<uint32_t, std::vector<uint32_t>> undirected;
    for (uint32_t a : prof.component)
        for (uint32_t b : g.adj[a]) {
            undirected[a].push_back(b);
            undirected[b].push_back(a);
        }
    while (!queue.empty()) {
        uint32_t v = queue.front();
        queue.pop_front();
        for (uint32_t w : undirected[v])
            if (!dist.count(w)) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    for (uint32_t v : prof.component) {
        if (!dist.count(v))
            fail(Errc::InvariantViolation, "component vertex unreachable from the floor");
        prof.level_of[v] = static_cast<long>(prof.d) - dist[v];
    }
    return prof;
}

struct ClauseReport {
    bool pass = true;
    std::vector<uint32_t> counterexamples;

    void note(uint32_t v) {
        pass = false;
        if (counterexamples.size() < 8) counterexamples.push_back(v);
    }
};

struct VolcanoReport {
    ClauseReport degree_iff_above_floor; // (i)
    ClauseReport surface_edges;          // (ii)
    ClauseReport middle_split;           // (iii)
    ClauseReport floor_single_edge;      // (iv)
    bool norm_equation = true;           // 4q = t^2 - v^2 D, exact
    bool depth_bound = true;             // ell^(2d) < 4q
    bool level_sizes = true;             // #V_i = #V_{i+1}/2 for 0 < i < d (ell = 2)

    bool pass() const {
        return degree_iff_above_floor.pass && surface_edges.pass && middle_split.pass &&
               floor_single_edge.pass && norm_equation && depth_bound && level_sizes;
    }
};

inline VolcanoReport verify_volcano(const IsogenyGraph& g, const VolcanoProfile& prof) {
    VolcanoReport rep;
    const long d = static_cast<long>(prof.d);
    const size_t full = static_cast<size_t>(g.ell + 1);

    for (uint32_t v : prof.component) {
        long i = prof.level_of.at(v);
        size_t deg = g.adj[v].size();
        if ((deg == full) != (i < d)) rep.degree_iff_above_floor.note(v);
        long up = 0, down = 0, level = 0;
        for (uint32_t w : g.adj[v]) {
            long lw = prof.level_of.count(w) ? prof.level_of.at(w) : -999;
            if (lw == i - 1) ++up;
            else if (lw == i + 1) ++down;
            else if (lw == i) ++level;
            else rep.middle_split.note(v);
        }
        if (i == 0 && d > 0 && down < g.ell - 1) rep.surface_edges.note(v);
        if (0 < i && i < d && !(up == 1 && down == static_cast<long>(deg) - 1))
            rep.middle_split.note(v);
        if (i == d && d > 0 && !(deg == 1 && up == 1)) rep.floor_single_edge.note(v);
    }

    rep.norm_equation = (4 * g.F.q() == prof.t * prof.t + prof.v * prof.v * (-prof.D));
    Integer pw = 1;
    for (unsigned i = 0; i < 2 * prof.d; ++i) pw *= g.ell;
    rep.depth_bound = pw < 4 * g.F.q();

    if (g.ell == 2 && d > 1) {
        std::map<long, long> sizes;
        for (uint32_t v : prof.component) ++sizes[prof.level_of.at(v)];
        for (long i = 1; i < d; ++i)
            if (2 * sizes[i] != sizes[i + 1]) rep.level_sizes = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Non-backtracking reachability.

namespace detail {

// Continuations of the path step (a -> b): out-neighbors of b with one copy
// of the back-edge to a removed.
inline std::vector<uint32_t> path_continuations(const IsogenyGraph& g, uint32_t a, uint32_t b) {
    std::vector<uint32_t> out;
    bool removed = false;
    for (uint32_t w : g.adj[b]) {
        if (!removed && w == a) {
            removed = true;
            continue;
        }
        out.push_back(w);
    }
    return out;
}

} // namespace detail

// R_k(j0, j1): endpoints of non-backtracking paths of length k starting with
// the edge (j0, j1).
inline std::set<uint32_t> reachable_set(const IsogenyGraph& g, const Fq& j0, const Fq& j1,
                                        long k) {
    uint32_t a = g.vertex_index(j0), b = g.vertex_index(j1);
    bool edge = false;
    for (uint32_t w : g.adj[a]) edge |= (w == b);
    if (!edge) fail(Errc::NotAnEdge, "(j0, j1) is not an edge of the graph");
    if (k < 1) fail(Errc::BadInput, "path length must be at least 1");

    std::set<std::pair<uint32_t, uint32_t>> frontier{{a, b}};
    for (long step = 1; step < k; ++step) {
        std::set<std::pair<uint32_t, uint32_t>> next;
        for (const auto& [x, y] : frontier)
            for (uint32_t z : detail::path_continuations(g, x, y)) next.insert({y, z});
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    std::set<uint32_t> out;
    for (const auto& [x, y] : frontier) out.insert(y);
    return out;
}

// Smallest k >= 1 with R_k empty, or nullopt if the frontier survives k_max.
inline std::optional<long> first_empty_reach(const IsogenyGraph& g, uint32_t a, uint32_t b,
                                             long k_max) {
    std::set<std::pair<uint32_t, uint32_t>> frontier{{a, b}};
    for (long k = 1; k <= k_max; ++k) {
        if (frontier.empty()) return k; // R_k empty (frontier holds paths of length k)
        std::set<std::pair<uint32_t, uint32_t>> next;
        for (const auto& [x, y] : frontier)
            for (uint32_t z : detail::path_continuations(g, x, y)) next.insert({y, z});
        frontier = std::move(next);
    }
    return std::nullopt;
}

// Flat-array engine for running first_empty_reach over every edge of a
// graph: the directed distinct edges are indexed once and the
// non-backtracking continuation relation is precomputed.
class EdgeTransitions {
public:
    explicit EdgeTransitions(const IsogenyGraph& g) {
        std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids;
        for (uint32_t a = 0; a < g.q; ++a)
            for (uint32_t b : g.adj[a])
                if (!ids.count({a, b})) {
                    ids[{a, b}] = static_cast<uint32_t>(edges_.size());
                    edges_.push_back({a, b});
                }
        trans_.resize(edges_.size());
        for (uint32_t e = 0; e < edges_.size(); ++e) {
            auto [a, b] = edges_[e];
            for (uint32_t z : detail::path_continuations(g, a, b)) {
                uint32_t id = ids.at({b, z});
                if (std::find(trans_[e].begin(), trans_[e].end(), id) == trans_[e].end())
                    trans_[e].push_back(id);
            }
        }
        ids_ = std::move(ids);
    }

    std::optional<long> first_empty(uint32_t a, uint32_t b, long k_max) const {
        auto it = ids_.find({a, b});
        if (it == ids_.end()) fail(Errc::NotAnEdge, "(a, b) is not an edge");
        std::vector<uint32_t> frontier{it->second};
        std::vector<uint32_t> mark(edges_.size(), 0);
        uint32_t stamp = 0;
        for (long k = 1; k <= k_max; ++k) {
            if (frontier.empty()) return k;
            ++stamp;
            std::vector<uint32_t> next;
            for (uint32_t e : frontier)
                for (uint32_t t : trans_[e])
                    if (mark[t] != stamp) {
                        mark[t] = stamp;
                        next.push_back(t);
                    }
            frontier = std::move(next);
        }
        return std::nullopt;
    }

private:
    std::vector<std::pair<uint32_t, uint32_t>> edges_;
    std::vector<std::vector<uint32_t>> trans_;
    std::map<std::pair<uint32_t, uint32_t>, uint32_t> ids_;
};

// ---------------------------------------------------------------------------
// Exports.

inline void export_dot(const IsogenyGraph& g, const std::vector<char>& ss, std::ostream& os) {
    os << "digraph isogeny {\n";
    for (uint32_t v = 0; v < g.q; ++v) {
        os << "  \"" << g.vertex_name(v) << "\"";
        if (ss[v]) os << " [peripheries=2, style=filled, fillcolor=lightgray]";
        os << ";\n";
    }
    for (uint32_t v = 0; v < g.q; ++v)
        for (uint32_t w : g.adj[v])
            os << "  \"" << g.vertex_name(v) << "\" -> \"" << g.vertex_name(w) << "\";\n";
    os << "}\n";
}

inline void export_json(const IsogenyGraph& g, const std::vector<char>& ss, std::ostream& os) {
    os << "{\n  \"p\": \"" << g.F.p().get_str() << "\",\n  \"degree\": " << g.F.degree()
       << ",\n";
    if (g.F.degree() == 2) os << "  \"alpha\": \"" << g.F.alpha().get_str() << "\",\n";
    os << "  \"ell\": " << g.ell << ",\n  \"adjacency\": {\n";
    for (uint32_t v = 0; v < g.q; ++v) {
        os << "    \"" << g.vertex_name(v) << "\": [";
        for (size_t i = 0; i < g.adj[v].size(); ++i)
            os << (i ? ", " : "") << "\"" << g.vertex_name(g.adj[v][i]) << "\"";
        os << "]" << (v + 1 < g.q ? "," : "") << "\n";
    }
    os << "  },\n  \"supersingular\": [";
    bool first = true;
    for (uint32_t v = 0; v < g.q; ++v)
        if (ss[v]) {
            os << (first ? "" : ", ") << "\"" << g.vertex_name(v) << "\"";
            first = false;
        }
    os << "]\n}\n";
}

inline void export_csv(const IsogenyGraph& g, std::ostream& os) {
    os << "source,target,multiplicity\n";
    for (uint32_t v = 0; v < g.q; ++v) {
        size_t i = 0;
        while (i < g.adj[v].size()) {
            size_t j = i;
            while (j < g.adj[v].size() && g.adj[v][j] == g.adj[v][i]) ++j;
            os << "\"" << g.vertex_name(v) << "\",\"" << g.vertex_name(g.adj[v][i]) << "\","
               << (j - i) << "\n";
            i = j;
        }
    }
}

} // namespace ssid
