// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include <ckgraph/desingularize.hpp>
#include <ckgraph/error.hpp>
#include <ckgraph/generate.hpp>
#include <ckgraph/invariants.hpp>

#include "f_oracles.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ckgraph;

namespace {

// Random walk of up to max_len edges; omega copies drawn from 0..5.
Path random_path(const Graph& g, std::mt19937_64& rng, std::size_t max_len) {
    VertexId v = static_cast<VertexId>(rng() % g.vertex_count());
    const VertexId start = v;
    std::vector<EdgeRef> edges;
    const std::size_t len = rng() % (max_len + 1);
    for (std::size_t k = 0; k < len; ++k) {
        const auto out = g.out_bundles(v);
        if (out.empty()) {
            break;
        }
        const BundleId b = out[rng() % out.size()];
        const auto& m = g.bundle(b).mult;
        const std::uint64_t copy = m.is_omega() ? rng() % 6 : rng() % m.count();
        edges.push_back(EdgeRef{b, copy});
        v = g.bundle(b).target;
    }
    return Path(g, start, std::move(edges));
}

bool same_graph(const Graph& a, const Graph& b) {
    if (a.vertex_count() != b.vertex_count() || a.bundle_count() != b.bundle_count()) {
        return false;
    }
    for (VertexId v = 0; v < a.vertex_count(); ++v) {
        if (a.name(v) != b.name(v)) {
            return false;
        }
    }
    for (BundleId i = 0; i < a.bundle_count(); ++i) {
        const auto& x = a.bundle(i);
        const auto& y = b.bundle(i);
        if (x.source != y.source || x.target != y.target || !(x.mult == y.mult)) {
            return false;
        }
    }
    return true;
}

std::vector<EventualPath> eventual_paths(const Graph& g) {
    std::vector<EventualPath> out;
    for (VertexId s = 0; s < g.vertex_count(); ++s) {
        for (VertexId t = 0; t < g.vertex_count(); ++t) {
            const auto p = shortest_path(g, s, t);
            if (!p) {
                continue;
            }
            if (is_singular(g, t)) {
                out.emplace_back(FinitePathToSingular(g, *p));
            }
            if (const auto c = cycle_through(g, t)) {
                out.emplace_back(Lasso(*p, *c));
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("canonical tail specs") {
    const Graph m = fixtures::e_main();
    const VertexId v0 = m.vertex("v0");
    const TailSpec s = canonical_tailspec(m, v0);
    CHECK(s.preamble == std::vector<EdgeRef>{{2, 0}, {3, 0}, {4, 0}});
    CHECK(s.period == std::vector<BundleId>{5});
    for (std::uint64_t j = 4; j <= 9; ++j) {
        CHECK(m.target(s.edge(j)) == m.vertex("w4"));
        CHECK(s.edge(j).copy == j - 4);
        CHECK(s.index_of(s.edge(j)) == j);
    }

    const TailSpec o = canonical_tailspec(fixtures::o_infinity(), 0);
    CHECK(o.preamble.empty());
    CHECK(o.period == std::vector<BundleId>{0});

    const Graph p = fixtures::e_prim();
    const TailSpec x = canonical_tailspec(p, p.vertex("x"));
    CHECK(x.is_sink_tail());
    CHECK_FALSE(x.has_edge(1));
    CHECK_THROWS_AS((void)x.edge(1), Error);

    CHECK_THROWS_AS(canonical_tailspec(m, m.vertex("w1")), Error);
}

TEST_CASE("malformed tail specs are rejected") {
    const Graph m = fixtures::e_main();
    const VertexId v0 = m.vertex("v0");
    TailSpec s = canonical_tailspec(m, v0);
    s.preamble.pop_back();
    CHECK_THROWS_AS(desingularize(m, {{v0, s}}), Error);
    s = canonical_tailspec(m, v0);
    s.preamble.push_back(s.preamble.front());
    CHECK_THROWS_AS(desingularize(m, {{v0, s}}), Error);
    s = canonical_tailspec(m, v0);
    s.period.clear();
    CHECK_THROWS_AS(desingularize(m, {{v0, s}}), Error);
    s = canonical_tailspec(m, v0);
    s.v0 = m.vertex("w1");
    CHECK_THROWS_AS(desingularize(m, {{m.vertex("w1"), s}}), Error);
}

TEST_CASE("desingularize E_main reproduces the tail picture") {
    const Graph m = fixtures::e_main();
    const VertexId v0 = m.vertex("v0");
    const auto d = desingularize(m);
    CHECK(d.tails().size() == 3); // v0 and the sinks w3, w4
    const auto f = [&](std::uint64_t j) { return FEdge::exit(v0, j); };
    CHECK(d.source(f(1)) == FVertex::core(v0));
    CHECK(d.target(f(1)) == FVertex::core(v0));
    CHECK(d.source(f(2)) == FVertex::tail(v0, 1));
    CHECK(d.target(f(2)) == FVertex::core(v0));
    CHECK(d.target(f(3)) == FVertex::core(m.vertex("w3")));
    for (std::uint64_t j = 4; j <= 12; ++j) {
        CHECK(d.source(f(j)) == FVertex::tail(v0, j - 1));
        CHECK(d.target(f(j)) == FVertex::core(m.vertex("w4")));
    }
    // Edges of E at v0 are gone.
    CHECK_FALSE(d.is_edge(FEdge::core(EdgeRef{2, 0})));
    CHECK(d.is_edge(FEdge::core(EdgeRef{0, 0})));
}

TEST_CASE("desingularize O-infinity sends every exit back to the base") {
    const auto d = desingularize(fixtures::o_infinity());
    for (std::uint64_t j = 1; j <= 20; ++j) {
        CHECK(d.source(FEdge::exit(0, j)) == FVertex::tail(0, j - 1));
        CHECK(d.target(FEdge::exit(0, j)) == FVertex::core(0));
    }
}

TEST_CASE("row-finite graphs without sinks get no tails") {
    const Graph g({"a", "b"}, {BundleSpec{0, 1, fixtures::one(), ""}, BundleSpec{1, 0, Multiplicity::finite(2), ""}});
    CHECK(desingularize(g).tails().empty());
}

TEST_CASE("alpha paths") {
    const Graph m = fixtures::e_main();
    const VertexId v0 = m.vertex("v0");
    const auto d = desingularize(m);
    const FPath a1 = alpha_path(d, v0, 1);
    CHECK(a1.size() == 1);
    CHECK(a1.is_loop());
    const FPath a4 = alpha_path(d, v0, 4);
    CHECK(a4.edges() == std::vector<FEdge>{FEdge::step(v0, 1), FEdge::step(v0, 2), FEdge::step(v0, 3),
                                           FEdge::exit(v0, 4)});
    CHECK(a4.range() == FVertex::core(m.vertex("w4")));

    const auto o = desingularize(fixtures::o_infinity());
    for (std::uint64_t j = 1; j < 8; ++j) {
        const FPath a = alpha_path(o, 0, j);
        CHECK(a.size() == j);
        CHECK(a.range() == FVertex::core(0));
    }
    CHECK_THROWS_AS(alpha_path(d, m.vertex("w3"), 1), Error);
}

TEST_CASE("phi and its inverse on fixtures") {
    const Graph m = fixtures::e_main();
    const VertexId v0 = m.vertex("v0");
    const auto d = desingularize(m);
    CHECK(phi(d, Path::at(m, 1)) == FPath::at(d, FVertex::core(1)));
    const FPath g3 = phi(d, Path(m, {EdgeRef{4, 0}}));
    CHECK(g3.edges() == std::vector<FEdge>{FEdge::step(v0, 1), FEdge::step(v0, 2), FEdge::exit(v0, 3)});
    CHECK(phi_inv(d, g3) == Path(m, {EdgeRef{4, 0}}));
    CHECK(phi_inv(d, FPath::at(d, FVertex::core(1))) == Path::at(m, 1));
    const FPath into_tail(d, FVertex::core(v0), {FEdge::step(v0, 1)});
    CHECK_THROWS_AS(phi_inv(d, into_tail), Error);
}

TEST_CASE("phi round trips on random paths") {
    std::mt19937_64 rng(31);
    GeneratorConfig cfg;
    for (int i = 0; i < 60; ++i) {
        const Graph g = random_graph(rng, cfg);
        const auto d = desingularize(g, random_tailspecs(g, rng));
        for (int k = 0; k < 1000; ++k) {
            const Path p = random_path(g, rng, 6);
            const FPath q = phi(d, p);
            CHECK(q.source() == FVertex::core(p.source()));
            CHECK(q.range() == FVertex::core(p.range()));
            const Path back = phi_inv(d, q);
            CHECK(back == p);
            CHECK(phi(d, back) == q);
        }
    }
}

TEST_CASE("phi preserves loops and simple loops at core vertices") {
    std::mt19937_64 rng(32);
    GeneratorConfig cfg;
    for (int i = 0; i < 150; ++i) {
        const Graph g = random_graph(rng, cfg);
        const auto d = desingularize(g, random_tailspecs(g, rng));
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            for (const Path& loop : simple_loops_based_at(g, v, 3).witnesses) {
                const FPath q = phi(d, loop);
                CHECK(q.is_loop());
                const auto verts = q.vertices(d);
                CHECK(std::count(verts.begin() + 1, verts.end() - 1, FVertex::core(v)) == 0);
            }
        }
    }
}

TEST_CASE("phi_infinity on fixtures") {
    const Graph m = fixtures::e_main();
    const VertexId v0 = m.vertex("v0");
    const auto d = desingularize(m);
    const auto mu = phi_infinity(d, FinitePathToSingular(m, Path::at(m, v0)));
    const auto* t = std::get_if<TailAbsorbed>(&mu);
    REQUIRE(t != nullptr);
    CHECK(t->prefix.empty());
    CHECK(t->v0 == v0);
    CHECK(t->start_index == 0);

    const Graph p = fixtures::e_prim();
    const auto dp = desingularize(p);
    const EventualPath vw = Lasso(Path::at(p, 0), Path(p, {EdgeRef{0, 0}, EdgeRef{1, 0}}));
    const auto img = phi_infinity(dp, vw);
    const auto* l = std::get_if<FLasso>(&img);
    REQUIRE(l != nullptr);
    CHECK(l->cycle.is_loop());
    CHECK(l->cycle.source() == FVertex::core(0));
    CHECK(psi_infinity(dp, img) == vw);
}

TEST_CASE("psi_infinity normalizes rotated lassos and tail rays") {
    const Graph o = fixtures::o_infinity();
    const auto d = desingularize(o);
    // Cycle (u,1) -f2-> u -e1-> (u,1), entered from u.
    const FPath prefix(d, FVertex::core(0), {FEdge::step(0, 1)});
    const FPath cycle(d, FVertex::tail(0, 1), {FEdge::exit(0, 2), FEdge::step(0, 1)});
    const EventualPath back = psi_infinity(d, FLasso(prefix, cycle));
    const auto* l = std::get_if<Lasso>(&back);
    REQUIRE(l != nullptr);
    // Rotation moves f2 into the prefix: g_2 then g_2 g_2 ...
    CHECK(l->prefix == Path(o, {EdgeRef{0, 1}}));
    CHECK(l->cycle == Path(o, {EdgeRef{0, 1}}));

    const FPath deep(d, FVertex::core(0), {FEdge::step(0, 1), FEdge::step(0, 2)});
    CHECK_THROWS_AS(psi_infinity(d, FLasso(FPath::at(d, FVertex::tail(0, 1)),
                                           FPath(d, FVertex::tail(0, 1), {FEdge::exit(0, 2), FEdge::step(0, 1)}))),
                    Error);
    const Graph p = fixtures::e_prim();
    const auto dp = desingularize(p);
    const VertexId x = p.vertex("x");
    const FPath to_x(dp, FVertex::core(0), {FEdge::step(0, 1), FEdge::exit(0, 2), FEdge::step(x, 1)});
    const EventualPath fin = psi_infinity(dp, TailAbsorbed(dp, to_x, x, 1));
    CHECK(std::get<FinitePathToSingular>(fin).path == Path(p, {EdgeRef{2, 0}}));
    (void)deep;
}

TEST_CASE("phi_infinity is inverted by psi_infinity and preserves connection") {
    std::mt19937_64 rng(33);
    GeneratorConfig cfg;
    cfg.max_vertices = 4;
    for (int i = 0; i < 300; ++i) {
        const Graph g = random_graph(rng, cfg);
        const auto d = desingularize(g, random_tailspecs(g, rng));
        for (const auto& lambda : eventual_paths(g)) {
            const auto mu = phi_infinity(d, lambda);
            CHECK(psi_infinity(d, mu) == lambda);
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                CHECK(connects_to_eventual(g, v, lambda) == f_connects_to_eventual(d, FVertex::core(v), mu));
            }
        }
    }
}

TEST_CASE("truncations") {
    const auto o = desingularize(fixtures::o_infinity());
    const auto t = truncate(o, 3);
    CHECK(t.graph.vertex_count() == 4);
    CHECK(t.graph.bundle_count() == 6);
    std::size_t back = 0;
    for (const auto& b : t.graph.bundles()) {
        back += t.edge_origin[b.id].kind == FEdge::Kind::Exit && b.target == 0 ? 1 : 0;
    }
    CHECK(back == 3);
    CHECK(t.boundary.count() == 1);
    CHECK(t.boundary.test(*t.find(FVertex::tail(0, 3))));
    CHECK_THROWS_AS(truncate(o, 0), Error);

    const Graph m = fixtures::e_main();
    const auto d = desingularize(m);
    const auto tm = truncate(d, 4);
    CHECK(tm.graph.vertex_count() == m.vertex_count() + 4 * d.tails().size());
    const VertexId from = *tm.find(FVertex::tail(m.vertex("v0"), 3));
    bool found = false;
    for (const auto& b : tm.graph.bundles()) {
        found = found || (b.source == from && b.target == m.vertex("w4") &&
                          tm.edge_origin[b.id] == FEdge::exit(m.vertex("v0"), 4));
    }
    CHECK(found);
}

TEST_CASE("tail vertices emit two edges, or one for sinks") {
    std::mt19937_64 rng(34);
    GeneratorConfig cfg;
    for (int i = 0; i < 100; ++i) {
        const Graph g = random_graph(rng, cfg);
        const auto d = desingularize(g, random_tailspecs(g, rng));
        const auto t = truncate(d, 6);
        for (VertexId u = 0; u < t.graph.vertex_count(); ++u) {
            const FVertex x = t.origin[u];
            if (x.is_core() || t.boundary.test(u)) {
                continue;
            }
            const auto deg = t.graph.out_degree(u);
            REQUIRE(deg.has_value());
            CHECK(*deg == (is_sink(g, x.v) ? 1U : 2U));
        }
        CHECK(t.graph.vertex_count() == g.vertex_count() + 6 * singular_vertices(g).count());
    }
}

TEST_CASE("F-level conditions on fixtures") {
    const auto o = desingularize(fixtures::o_infinity());
    CHECK(condition_L_F(o).value);
    CHECK(condition_K_F(o).value);
    CHECK(cofinal_F(o).value);
    CHECK_FALSE(cofinal_F(desingularize(fixtures::e_prim())).value);
    const auto s = condition_L_F(desingularize(fixtures::single_loop()));
    CHECK_FALSE(s.value);
    REQUIRE(s.witness.has_value());
    CHECK(s.witness->loop->is_loop());
    const auto k = condition_K_F(desingularize(fixtures::e_prim()));
    CHECK_FALSE(k.value);
    CHECK(k.witness->loop->is_loop());
}

TEST_CASE("F-level conditions match E and brute force on truncations") {
    std::mt19937_64 rng(35);
    GeneratorConfig cfg;
    for (int i = 0; i < 300; ++i) {
        const Graph g = random_graph(rng, cfg);
        const auto d = desingularize(g, random_tailspecs(g, rng));
        const bool l = condition_L_F(d).value;
        const bool k = condition_K_F(d).value;
        CHECK(l == condition_L(g).value);
        CHECK(k == condition_K(g).value);
        CHECK(l == oracle::truncated_condition_L(d));
        CHECK(k == oracle::truncated_condition_K(d));
        CHECK(cofinal_F(d).value == (is_cofinal(g).value && all_singular_reachable(g).value));
    }
}

TEST_CASE("F-level conditions do not depend on the enumeration") {
    std::mt19937_64 rng(36);
    GeneratorConfig cfg;
    for (int i = 0; i < 150; ++i) {
        const Graph g = random_graph(rng, cfg);
        const auto a = desingularize(g, random_tailspecs(g, rng));
        const auto b = desingularize(g, random_tailspecs(g, rng));
        CHECK(condition_L_F(a).value == condition_L_F(b).value);
        CHECK(condition_K_F(a).value == condition_K_F(b).value);
        CHECK(cofinal_F(a).value == cofinal_F(b).value);
    }
}

TEST_CASE("tail subsets") {
    const auto a = TailSubset::at_least(3);
    CHECK_FALSE(a.contains(2));
    CHECK(a.contains(3));
    CHECK(a.contains(100));
    CHECK(*a.threshold() == 3);
    CHECK(*a.min() == 3);
    CHECK(TailSubset::at_least(1) == TailSubset::all());
    const auto b = TailSubset::below(3);
    CHECK(b.contains(1));
    CHECK(b.contains(2));
    CHECK_FALSE(b.contains(3));
    CHECK((a | b) == TailSubset::all());
    CHECK((a & b).is_empty());
    CHECK(~a == b);
    CHECK(TailSubset::at_least(5).subset_of(a));
    CHECK_FALSE(a.subset_of(TailSubset::at_least(5)));
    CHECK(TailSubset::from({false, true, false}, false).describe() == "{2}");
    CHECK(a.describe() == ">=3");
    CHECK(b.describe() == "<3");
    CHECK(TailSubset::none().describe() == "none");
}

TEST_CASE("f_reach and f_coreach agree with truncations") {
    std::mt19937_64 rng(37);
    GeneratorConfig cfg;
    cfg.max_vertices = 5;
    for (int i = 0; i < 100; ++i) {
        const Graph g = random_graph(rng, cfg);
        const auto d = desingularize(g, random_tailspecs(g, rng));
        const std::uint64_t depth = d.window() + 6;
        const auto t = truncate(d, depth);
        const auto r = oracle::reach_matrix(t.graph);
        for (VertexId a = 0; a < t.graph.vertex_count(); ++a) {
            const FVertex x = t.origin[a];
            if (x.depth + 3 > depth) {
                continue;
            }
            const FVertexSet fr = f_reach(d, x);
            for (VertexId b = 0; b < t.graph.vertex_count(); ++b) {
                if (t.boundary.test(b)) {
                    continue;
                }
                CHECK(fr.contains(t.origin[b]) == r[a][b]);
            }
            FVertexSet single = f_empty_set(d);
            if (x.is_core()) {
                single.core.set(x.v);
            } else {
                single.tails[x.v] = TailSubset::at_least(x.depth) & TailSubset::below(x.depth + 1);
            }
            const FVertexSet co = f_coreach(d, single);
            for (VertexId b = 0; b < t.graph.vertex_count(); ++b) {
                if (t.origin[b].depth + 3 > depth) {
                    continue;
                }
                CHECK(co.contains(t.origin[b]) == r[b][a]);
            }
        }
    }
}

TEST_CASE("partitioned desingularization") {
    const Graph m = fixtures::e_main();
    const VertexId v0 = m.vertex("v0");
    const auto plain = truncate(desingularize(m), 7);
    const auto singles = desingularize_partitioned(m, {}).truncate(7);
    CHECK(same_graph(plain.graph, singles.graph));

    PartitionSpec p;
    p.v0 = v0;
    p.blocks = {{EdgeRef{2, 0}, EdgeRef{3, 0}, EdgeRef{4, 0}}};
    const auto pd = desingularize_partitioned(m, {{v0, p}});
    const auto t = pd.truncate(5);
    const auto deg = [&](std::uint64_t n) { return *t.graph.out_degree(*t.find(FVertex::tail(v0, n))); };
    CHECK(*t.graph.out_degree(v0) == 4);
    for (std::uint64_t n = 1; n < 5; ++n) {
        CHECK(deg(n) == 2);
        CHECK(pd.block(v0, n).front().bundle == 5);
    }

    PartitionSpec bad = p;
    bad.blocks = {{EdgeRef{2, 0}}};
    CHECK_THROWS_AS(desingularize_partitioned(m, {{v0, bad}}), Error);
    bad.blocks = {{EdgeRef{2, 0}, EdgeRef{3, 0}, EdgeRef{4, 0}}, {EdgeRef{2, 0}}};
    CHECK_THROWS_AS(desingularize_partitioned(m, {{v0, bad}}), Error);
}

TEST_CASE("ideal-aware partition keeps later tail vertices inside H") {
    // v0 in B_H for H = {x}: finite edges to a and b, omega edges to x.
    const Graph g({"v0", "a", "b", "x"}, {BundleSpec{0, 1, fixtures::one(), ""},
                                         BundleSpec{0, 2, Multiplicity::finite(2), ""},
                                         BundleSpec{0, 3, fixtures::omega(), ""},
                                         BundleSpec{1, 0, fixtures::one(), ""},
                                         BundleSpec{2, 0, fixtures::one(), ""}});
    PartitionSpec p;
    p.v0 = 0;
    p.blocks = {{EdgeRef{0, 0}, EdgeRef{1, 0}, EdgeRef{1, 1}}};
    p.rest_block_size = 2;
    const auto pd = desingularize_partitioned(g, {{0, p}});
    const auto t = pd.truncate(6);
    for (std::uint64_t n = 1; n < 6; ++n) {
        const VertexId u = *t.find(FVertex::tail(0, n));
        for (const BundleId b : t.graph.out_bundles(u)) {
            const FVertex tgt = t.origin[t.graph.bundle(b).target];
            CHECK((tgt == FVertex::core(3) || tgt == FVertex::tail(0, n + 1)));
        }
        CHECK(pd.block(0, n).size() == 2);
    }
}
