#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ssid/selftest.hpp"
#include "ssid/volcano.hpp"

using namespace ssid;

TEST_CASE("graph over F_11 at ell = 2") {
    Field F{Integer(11)};
    IsogenyGraph g = build_graph(F, 2);

    // vertex 0 has the triple edge to 54000 mod 11 = 1
    CHECK(g.adj[0] == std::vector<uint32_t>{1, 1, 1});

    std::vector<char> ss = classify_vertices(g);
    std::vector<uint32_t> ss_set;
    for (uint32_t v = 0; v < g.q; ++v)
        if (ss[v]) ss_set.push_back(v);
    CHECK(ss_set == std::vector<uint32_t>{0, 1});

    for (uint32_t v = 0; v < g.q; ++v) CHECK(g.adj[v].size() <= 3);

    CHECK_THROWS_MATCHES(build_graph(F, 11), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::SameCharacteristic;
                         }));
}

TEST_CASE("guard on oversized fields") {
    Field F{Integer(1048583)};
    CHECK_THROWS_MATCHES(build_graph(F, 2), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::FieldTooLarge;
                         }));
}

TEST_CASE("profiles satisfy the norm equation and depth bound") {
    for (unsigned long p : {11ul, 13ul, 31ul, 101ul}) {
        Field F{Integer(p)};
        IsogenyGraph g = build_graph(F, 2);
        std::vector<char> ss = classify_vertices(g);
        for (const auto& comp : connected_components(g)) {
            if (ss[comp.front()]) continue;
            VolcanoProfile prof = profile_component(g, g.vertex_value(comp.front()), &comp);
            CHECK(4 * F.q() == prof.t * prof.t + prof.v * prof.v * (-prof.D));
            Integer pw = 1;
            for (unsigned i = 0; i < 2 * prof.d; ++i) pw *= 2;
            CHECK(pw < 4 * F.q());
            // depth bound instance from the module contract: d <= 2 at q = 11
            if (p == 11) CHECK(prof.d <= 2);
        }
    }
}

TEST_CASE("profiling a supersingular vertex is rejected") {
    Field F{Integer(11)};
    IsogenyGraph g = build_graph(F, 2);
    CHECK_THROWS_MATCHES(profile_component(g, F.zero()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::SupersingularVertex;
                         }));
}

TEST_CASE("volcano clauses hold on sampled small fields") {
    for (unsigned long p : {11ul, 13ul, 101ul}) {
        Field F{Integer(p)};
        for (int ell : {2, 3}) {
            if (Integer(ell) == F.p()) continue;
            IsogenyGraph g = build_graph(F, ell);
            std::vector<char> ss = classify_vertices(g);
            for (const auto& comp : connected_components(g)) {
                if (ss[comp.front()]) continue;
                VolcanoProfile prof = profile_component(g, g.vertex_value(comp.front()), &comp);
                VolcanoReport rep = verify_volcano(g, prof);
                INFO("p=" << p << " ell=" << ell << " j=" << g.vertex_name(comp.front()));
                CHECK(rep.pass());
            }
        }
    }
    // and over one extension field
    Field F2 = Field::quadratic_canonical(Integer(7));
    IsogenyGraph g = build_graph(F2, 2);
    std::vector<char> ss = classify_vertices(g);
    for (const auto& comp : connected_components(g)) {
        if (ss[comp.front()]) continue;
        VolcanoProfile prof = profile_component(g, g.vertex_value(comp.front()), &comp);
        CHECK(verify_volcano(g, prof).pass());
    }
}

TEST_CASE("supersingular component over F_p^2 is 3-regular and unique") {
    for (unsigned long p : {5ul, 7ul, 11ul, 13ul}) {
        Field F2 = Field::quadratic_canonical(Integer(p));
        IsogenyGraph g = build_graph(F2, 2);
        std::vector<char> ss = classify_vertices(g);
        long components = 0;
        for (const auto& comp : connected_components(g)) {
            if (!ss[comp.front()]) continue;
            ++components;
            for (uint32_t v : comp) CHECK(g.adj[v].size() == 3);
        }
        CHECK(components == 1);
    }
}

TEST_CASE("reachable sets") {
    Field F{Integer(11)};
    IsogenyGraph g = build_graph(F, 2);

    // R_1 is the second vertex of the starting edge
    auto r1 = reachable_set(g, F.zero(), F.one(), 1);
    CHECK(r1 == std::set<uint32_t>{1});

    CHECK_THROWS_MATCHES(reachable_set(g, F.zero(), F.elt(5), 1), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::NotAnEdge;
                         }));

    // supersingular start: never empty for k <= 2m
    long m = walk_rounds(F.p());
    for (long k = 1; k <= 2 * m; ++k) CHECK_FALSE(reachable_set(g, F.zero(), F.one(), k).empty());

    // ordinary degree-3 vertices carry at least one early-dying edge
    std::vector<char> ss = classify_vertices(g);
    long k_bound = 0;
    {
        Integer pw = 1;
        while (pw < 4 * F.q()) {
            pw *= 4;
            ++k_bound;
        }
    }
    for (uint32_t v = 0; v < g.q; ++v) {
        if (ss[v] || g.adj[v].size() != 3) continue;
        long early = 0;
        for (uint32_t w : g.adj[v])
            if (first_empty_reach(g, v, w, k_bound)) ++early;
        CHECK(early >= 1);
    }
}

TEST_CASE("exports") {
    Field F{Integer(11)};
    IsogenyGraph g = build_graph(F, 2);
    std::vector<char> ss = classify_vertices(g);

    std::ostringstream dot;
    export_dot(g, ss, dot);
    CHECK(dot.str().find("digraph") != std::string::npos);
    CHECK(dot.str().find("\"0\" -> \"1\"") != std::string::npos);

    std::ostringstream csv;
    export_csv(g, csv);
    CHECK(csv.str().find("source,target,multiplicity\n") == 0);
    CHECK(csv.str().find("\"0\",\"1\",3") != std::string::npos);

    std::ostringstream js;
    export_json(g, ss, js);
    CHECK(js.str().find("\"supersingular\": [\"0\", \"1\"]") != std::string::npos);
}

TEST_CASE("volcano structure suite at a quick scale") {
    SuiteOutcome out = volcano_structure_suite(60);
    INFO((out.failures.empty() ? std::string() : out.failures.front()));
    CHECK(out.pass);
    CHECK(out.checks > 100);
}
