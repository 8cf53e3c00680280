// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include <ckgraph/ck_verifier.hpp>
#include <ckgraph/error.hpp>
#include <ckgraph/generate.hpp>

#include "fixtures.hpp"

using namespace ckgraph;

namespace {

constexpr double tol = 1e-12;

bool acyclic(const Graph& g) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (on_cycle(g, v)) {
            return false;
        }
    }
    return true;
}

Eigen::Index rank(const Matrix& m) {
    Eigen::FullPivLU<Matrix> lu(m);
    return lu.rank();
}

// Random path of the truncation ending at `end`, walking edges backwards.
Path walk_back(const Graph& g, VertexId end, std::size_t len, std::mt19937_64& rng) {
    std::vector<EdgeRef> rev;
    VertexId at = end;
    for (std::size_t k = 0; k < len; ++k) {
        std::vector<EdgeRef> in;
        for (const auto& b : g.bundles()) {
            if (b.target == at) {
                for (std::uint64_t c = 0; c < b.mult.count(); ++c) {
                    in.push_back(EdgeRef{b.id, c});
                }
            }
        }
        if (in.empty()) {
            break;
        }
        const EdgeRef e = in[rng() % in.size()];
        rev.push_back(e);
        at = g.source(e);
    }
    std::reverse(rev.begin(), rev.end());
    return Path(g, at, rev);
}

void check_extension(const ExtensionResult& ext) {
    for (const auto& [k, v] : ext.relations.defects) {
        CHECK_MESSAGE(v <= tol, k << " at " << ext.relations.worst.at(k));
    }
    for (const auto& [k, v] : ext.bullets) {
        CHECK_MESSAGE(v <= tol, k);
    }
    CHECK(ext.monotonicity >= -tol);
}

} // namespace

TEST_CASE("canonical family on a single sink") {
    const auto f = build_canonical_family(fixtures::single_vertex());
    CHECK(f.dim == 1);
    CHECK(f.p.at(0) == Matrix::Identity(1, 1));
    CHECK(check_ck_relations(f, fixtures::single_vertex()).pass());
}

TEST_CASE("canonical family on one edge") {
    const Graph g = fixtures::sink_edge();
    const auto f = build_canonical_family(g);
    CHECK(f.dim == 2);
    CHECK(rank(f.p.at(0)) == 1);
    CHECK(rank(f.p.at(1)) == 1);
    CHECK(rank(f.s.at(EdgeRef{0, 0})) == 1);
    const auto r = check_ck_relations(f, g);
    CHECK(r.max_defect() == 0.0);
}

TEST_CASE("canonical family on a binary tree of depth two") {
    const Graph g({"r", "a", "b", "c", "d", "e", "f"},
                  {BundleSpec{0, 1, fixtures::one(), ""}, BundleSpec{0, 2, fixtures::one(), ""},
                   BundleSpec{1, 3, fixtures::one(), ""}, BundleSpec{1, 4, fixtures::one(), ""},
                   BundleSpec{2, 5, fixtures::one(), ""}, BundleSpec{2, 6, fixtures::one(), ""}});
    const auto f = build_canonical_family(g);
    // 4 sinks, 4 paths of length one, 4 of length two.
    CHECK(f.dim == 12);
    CHECK(check_ck_relations(f, g).max_defect() == 0.0);
}

TEST_CASE("canonical family rejects cycles and omega") {
    CHECK_THROWS_AS(build_canonical_family(fixtures::single_loop()), Error);
    CHECK_THROWS_AS(build_canonical_family(fixtures::omega_to_sink()), Error);
}

TEST_CASE("defects of broken families") {
    const Graph g = fixtures::sink_edge();
    auto f = build_canonical_family(g);
    f.s.at(EdgeRef{0, 0}) *= 2.0;
    CHECK(check_ck_relations(f, g).defects.at("isometry") == doctest::Approx(3.0));

    CKFamily z = build_canonical_family(g);
    for (auto& [v, p] : z.p) {
        p = Matrix::Identity(2, 2);
    }
    for (auto& [e, s] : z.s) {
        s = Matrix::Zero(2, 2);
    }
    CHECK(check_ck_relations(z, g).defects.at("sum") == doctest::Approx(1.0));

    CKFamily wrong = build_canonical_family(g);
    wrong.p.at(0) = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(check_ck_relations(wrong, g), Error);
}

TEST_CASE("canonical families on random acyclic graphs are exact") {
    std::mt19937_64 rng(51);
    GeneratorConfig cfg;
    cfg.palette = {Multiplicity::finite(1), Multiplicity::finite(2)};
    std::size_t tested = 0;
    for (int i = 0; i < 400; ++i) {
        const Graph g = random_graph(rng, cfg);
        if (!acyclic(g)) {
            continue;
        }
        try {
            const auto f = build_canonical_family(g, 25);
            CHECK(check_ck_relations(f, g).max_defect() == 0.0);
            ++tested;
        } catch (const Error&) {
            // more than 25 basis paths
        }
    }
    CHECK(tested > 50);
}

TEST_CASE("extension on the sink example") {
    const Graph g = fixtures::sink_edge();
    const auto d = desingularize(g);
    const auto f = build_canonical_family(g);
    const auto ext = extend_to_F(f, d, 5);
    check_extension(ext);
    const auto& t = ext.truncation;
    // Each tail projection is a copy of P_x.
    for (std::uint64_t n = 1; n <= 5; ++n) {
        const VertexId tv = *t.find(FVertex::tail(1, n));
        CHECK(rank(ext.family.p.at(tv)) == rank(f.p.at(1)));
    }
    CHECK(t.boundary.count() == 1);
}

TEST_CASE("extension on two singular vertices") {
    const Graph g = fixtures::omega_to_sink();
    const auto d = desingularize(g);
    const auto f = build_standin_family(g, 6);
    CHECK(check_ck_relations(f, g).pass());
    const auto ext = extend_to_F(f, d, 5);
    check_extension(ext);
    const auto& t = ext.truncation;
    const auto& fam = ext.family;
    // Q_{v_n} = T_{e_{n+1}} T_{e_{n+1}}* + T_{f_{n+1}} T_{f_{n+1}}* below the cut.
    for (std::uint64_t n = 1; n + 1 <= 5; ++n) {
        const Matrix& te = fam.s.at(truncated_edge(t, FEdge::step(0, n + 1)));
        const Matrix& tf = fam.s.at(truncated_edge(t, FEdge::exit(0, n + 1)));
        const Matrix& q = fam.p.at(*t.find(FVertex::tail(0, n)));
        CHECK((q - te * te.adjoint() - tf * tf.adjoint()).cwiseAbs().maxCoeff() <= tol);
    }
    CHECK_THROWS_AS(extend_to_F(build_standin_family(g, 2), d, 5), Error);
}

TEST_CASE("extension on random acyclic graphs and tail specs") {
    std::mt19937_64 rng(52);
    GeneratorConfig cfg;
    cfg.max_vertices = 4;
    std::size_t tested = 0;
    for (int i = 0; i < 300 && tested < 60; ++i) {
        const Graph g = random_graph(rng, cfg);
        if (!acyclic(g)) {
            continue;
        }
        const std::uint64_t m = 1 + rng() % 4;
        try {
            const auto f = build_standin_family(g, m + 1, 200);
            const auto ext = extend_to_F(f, desingularize(g, random_tailspecs(g, rng)), m);
            check_extension(ext);
            ++tested;
        } catch (const Error&) {
            // path space too large
        }
    }
    CHECK(tested > 20);
}

TEST_CASE("corner identity") {
    std::mt19937_64 rng(53);
    for (const Graph& g : {fixtures::sink_edge(), fixtures::omega_to_sink()}) {
        const auto d = desingularize(g);
        const auto ext = extend_to_F(build_standin_family(g, 6), d, 5);
        const auto& t = ext.truncation;

        const FPath at_v(d, FVertex::core(0), {});
        CHECK(corner_check(ext, at_v, at_v));

        for (int i = 0; i < 200; ++i) {
            const auto end = static_cast<VertexId>(rng() % t.graph.vertex_count());
            const Path a = walk_back(t.graph, end, rng() % 5, rng);
            const Path b = walk_back(t.graph, end, rng() % 5, rng);
            const FPath mu = untruncated_path(d, t, a);
            const FPath nu = untruncated_path(d, t, b);
            CHECK(corner_defect(ext, mu, nu) <= tol);
            if (!mu.source().is_core()) {
                // p kills everything starting on a tail.
                const Matrix pc = corner_projection(ext);
                CHECK((pc * path_operator(ext.family, a, b) * pc).cwiseAbs().maxCoeff() <= tol);
            }
        }
        const auto sample = sample_corners(ext, d, 200, 7);
        CHECK(sample.pairs == 200);
        CHECK(sample.failures == 0);
        CHECK(sample.worst <= tol);

        const FPath other(d, FVertex::core(1), {});
        CHECK_THROWS_AS((void)corner_defect(ext, at_v, other), Error);
    }
}

TEST_CASE("corner absorbs alpha paths into the core") {
    const Graph g = fixtures::omega_to_sink();
    const auto d = desingularize(g);
    const auto ext = extend_to_F(build_standin_family(g, 6), d, 5);
    for (std::uint64_t j = 1; j <= 5; ++j) {
        const FPath a = alpha_path(d, 0, j);
        const FPath end(d, a.range(), {});
        CHECK(corner_check(ext, a, end));
    }
}
