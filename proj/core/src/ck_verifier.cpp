// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include <ckgraph/ck_verifier.hpp>

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include <ckgraph/error.hpp>

namespace ckgraph {

namespace {

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::string edge_text(const Graph& g, const EdgeRef& e) {
    return g.name(g.source(e)) + "->" + g.name(g.target(e)) + "#" + std::to_string(e.copy);
}

void require_acyclic(const Graph& g) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (on_cycle(g, v)) {
            throw Error("finite-dimensional family needs an acyclic graph; " + g.name(v) + " lies on a cycle");
        }
    }
}

// Basis: every path over realized edges ending at a basis terminal.
CKFamily path_space(const Graph& g, std::uint64_t omega_copies, const VertexSet& terminal, std::size_t max_dim) {
    const auto copies = [&](const EdgeBundle& b) { return b.mult.is_omega() ? omega_copies : b.mult.count(); };
    // Paths are stored as (source, edges), grown backwards from terminals.
    std::vector<std::pair<VertexId, std::vector<EdgeRef>>> basis;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (terminal.test(v)) {
            basis.push_back({v, {}});
        }
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (const auto& b : g.bundles()) {
            if (b.target != basis[i].first) {
                continue;
            }
            for (std::uint64_t c = 0; c < copies(b); ++c) {
                std::vector<EdgeRef> edges{EdgeRef{b.id, c}};
                edges.insert(edges.end(), basis[i].second.begin(), basis[i].second.end());
                basis.push_back({b.source, std::move(edges)});
                if (basis.size() > max_dim) {
                    throw Error("path space exceeds " + std::to_string(max_dim) + " basis paths");
                }
            }
        }
    }
    std::map<std::pair<VertexId, std::vector<EdgeRef>>, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        index.emplace(basis[i], i);
    }
    CKFamily fam;
    fam.dim = basis.size();
    const auto n = static_cast<Eigen::Index>(fam.dim);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        fam.p.emplace(v, Matrix::Zero(n, n));
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        fam.p.at(basis[i].first)(k, k) = 1.0;
    }
    for (const auto& b : g.bundles()) {
        for (std::uint64_t c = 0; c < copies(b); ++c) {
            Matrix s = Matrix::Zero(n, n);
            for (std::size_t i = 0; i < basis.size(); ++i) {
                if (basis[i].first != b.target) {
                    continue;
                }
                std::vector<EdgeRef> edges{EdgeRef{b.id, c}};
                edges.insert(edges.end(), basis[i].second.begin(), basis[i].second.end());
                const std::size_t j = index.at({b.source, edges});
                s(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
            }
            fam.s.emplace(EdgeRef{b.id, c}, std::move(s));
        }
    }
    return fam;
}

Path backward_walk(const Graph& g, VertexId end, std::size_t len, std::mt19937_64& rng) {
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
    return Path(g, at, std::move(rev));
}

} // namespace

double DefectReport::max_defect() const {
    double m = 0;
    for (const auto& kv : defects) {
        m = std::max(m, kv.second);
    }
    return m;
}

CKFamily build_canonical_family(const Graph& g, std::size_t max_dim) {
    for (const auto& b : g.bundles()) {
        if (b.mult.is_omega()) {
            throw Error("canonical family needs finite multiplicities");
        }
    }
    require_acyclic(g);
    VertexSet sinks = g.empty_set();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        sinks[v] = is_sink(g, v);
    }
    return path_space(g, 0, sinks, max_dim);
}

CKFamily build_standin_family(const Graph& g, std::uint64_t omega_copies, std::size_t max_dim) {
    require_acyclic(g);
    return path_space(g, omega_copies, singular_vertices(g), max_dim);
}

DefectReport check_ck_relations(const CKFamily& fam, const Graph& g) {
    DefectReport r;
    r.tol = fam.tol;
    const auto n = static_cast<Eigen::Index>(fam.dim);
    const auto fetch_p = [&](VertexId v) -> const Matrix& {
        const auto it = fam.p.find(v);
        if (it == fam.p.end()) {
            throw Error("family has no projection for " + g.name(v));
        }
        if (it->second.rows() != n || it->second.cols() != n) {
            throw Error("projection for " + g.name(v) + " has the wrong dimension");
        }
        return it->second;
    };
    for (const auto& [e, s] : fam.s) {
        if (!g.is_edge(e)) {
            throw Error("family names an edge the graph does not have");
        }
        if (s.rows() != n || s.cols() != n) {
            throw Error("partial isometry for " + edge_text(g, e) + " has the wrong dimension");
        }
    }
    const auto note = [&](const std::string& key, double value, const std::string& where) {
        auto [it, fresh] = r.defects.emplace(key, value);
        if (fresh || value > it->second) {
            it->second = value;
            r.worst[key] = where;
        }
    };
    for (const char* key : {"projection", "orthogonality", "isometry", "range", "range_orthogonality", "sum"}) {
        note(key, 0.0, "");
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const Matrix& p = fetch_p(v);
        note("projection", std::max(max_abs(p * p - p), max_abs(p.adjoint() - p)), g.name(v));
        for (VertexId w = v + 1; w < g.vertex_count(); ++w) {
            note("orthogonality", max_abs(p * fetch_p(w)), g.name(v) + "," + g.name(w));
        }
    }
    for (const auto& [e, s] : fam.s) {
        note("isometry", max_abs(s.adjoint() * s - fetch_p(g.target(e))), edge_text(g, e));
        note("range", max_abs(fetch_p(g.source(e)) * s - s), edge_text(g, e));
        for (const auto& [f, t] : fam.s) {
            if (e < f) {
                note("range_orthogonality", max_abs(s.adjoint() * t), edge_text(g, e) + "," + edge_text(g, f));
            }
        }
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (is_singular(g, v)) {
            continue;
        }
        Matrix sum = Matrix::Zero(n, n);
        for (const BundleId b : g.out_bundles(v)) {
            for (std::uint64_t c = 0; c < g.bundle(b).mult.count(); ++c) {
                const auto it = fam.s.find(EdgeRef{b, c});
                if (it == fam.s.end()) {
                    throw Error("family is missing an edge at regular vertex " + g.name(v));
                }
                sum += it->second * it->second.adjoint();
            }
        }
        note("sum", max_abs(fetch_p(v) - sum), g.name(v));
    }
    return r;
}

ExtensionResult extend_to_F(const CKFamily& fam, const DesingularizedGraph& d, std::uint64_t m) {
    const Graph& g = d.core();
    if (m == 0) {
        throw Error("extension depth must be positive");
    }
    ExtensionResult out{truncate(d, m), {}, {}, {}, 0.0};
    const TruncatedGraph& t = out.truncation;
    const auto n = static_cast<Eigen::Index>(fam.dim);

    // Block layout: H_E, then copies 1..m for each tail in map order.
    std::map<VertexId, Eigen::Index> first_copy;
    Eigen::Index blocks = 1;
    for (const auto& kv : d.tails()) {
        first_copy.emplace(kv.first, blocks);
        blocks += static_cast<Eigen::Index>(m);
    }
    const Eigen::Index dim = blocks * n;
    const auto block_of = [&](VertexId v0, std::uint64_t copy) {
        return copy == 0 ? Eigen::Index{0} : (first_copy.at(v0) + static_cast<Eigen::Index>(copy) - 1) * n;
    };
    const auto embed = [&](const Matrix& a, Eigen::Index row, Eigen::Index col) {
        Matrix x = Matrix::Zero(dim, dim);
        x.block(row, col, n, n) = a;
        return x;
    };

    // R_n for n = 0..m per tail.
    std::map<VertexId, std::vector<Matrix>> r;
    for (const auto& [v0, spec] : d.tails()) {
        std::vector<Matrix> rn{Matrix::Zero(n, n)};
        for (std::uint64_t j = 1; j <= m; ++j) {
            Matrix next = rn.back();
            if (spec.has_edge(j)) {
                const auto it = fam.s.find(spec.edge(j));
                if (it == fam.s.end()) {
                    throw Error("family does not realize g_" + std::to_string(j) + " at " + g.name(v0));
                }
                next += it->second * it->second.adjoint();
            }
            rn.push_back(std::move(next));
        }
        r.emplace(v0, std::move(rn));
    }

    CKFamily& f = out.family;
    f.dim = static_cast<std::size_t>(dim);
    f.tol = fam.tol;
    for (VertexId tv = 0; tv < t.graph.vertex_count(); ++tv) {
        const FVertex x = t.origin[tv];
        const Matrix& pv = fam.p.at(x.v);
        if (x.is_core()) {
            f.p.emplace(tv, embed(pv, 0, 0));
        } else {
            const Eigen::Index b = block_of(x.v, x.depth);
            f.p.emplace(tv, embed(pv - r.at(x.v)[x.depth], b, b));
        }
    }
    for (BundleId b = 0; b < t.graph.bundle_count(); ++b) {
        const FEdge& o = t.edge_origin[b];
        const auto& bundle = t.graph.bundle(b);
        switch (o.kind) {
        case FEdge::Kind::Core:
            for (std::uint64_t c = 0; c < bundle.mult.count(); ++c) {
                f.s.emplace(EdgeRef{b, c}, embed(fam.s.at(EdgeRef{o.core_edge.bundle, c}), 0, 0));
            }
            break;
        case FEdge::Kind::Step: {
            // e_n: copy n into copy n-1, an inclusion of (P - R_n)H_E.
            const Matrix q = fam.p.at(o.v0) - r.at(o.v0)[o.index];
            f.s.emplace(EdgeRef{b, 0}, embed(q, block_of(o.v0, o.index - 1), block_of(o.v0, o.index)));
            break;
        }
        case FEdge::Kind::Exit: {
            // f_j: H_E into copy j-1 through S_{g_j}.
            const Matrix& sg = fam.s.at(d.tail(o.v0).edge(o.index));
            f.s.emplace(EdgeRef{b, 0}, embed(sg, block_of(o.v0, o.index - 1), 0));
            break;
        }
        }
    }
    out.relations = check_ck_relations(f, t.graph);

    // Lemma bullets, compared on H_F.
    double vertices = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        vertices = std::max(vertices, max_abs(f.p.at(v) - embed(fam.p.at(v), 0, 0)));
    }
    double regular = 0;
    for (BundleId b = 0; b < t.graph.bundle_count(); ++b) {
        const FEdge& o = t.edge_origin[b];
        if (o.kind != FEdge::Kind::Core) {
            continue;
        }
        for (std::uint64_t c = 0; c < t.graph.bundle(b).mult.count(); ++c) {
            regular = std::max(regular, max_abs(f.s.at(EdgeRef{b, c}) -
                                                embed(fam.s.at(EdgeRef{o.core_edge.bundle, c}), 0, 0)));
        }
    }
    double alpha = 0;
    for (const auto& [v0, spec] : d.tails()) {
        for (std::uint64_t j = 1; j <= m && spec.has_edge(j); ++j) {
            Matrix prod = Matrix::Identity(dim, dim);
            for (std::uint64_t k = 1; k < j; ++k) {
                prod = prod * f.s.at(truncated_edge(t, FEdge::step(v0, k)));
            }
            prod = prod * f.s.at(truncated_edge(t, FEdge::exit(v0, j)));
            alpha = std::max(alpha, max_abs(prod - embed(fam.s.at(spec.edge(j)), 0, 0)));
        }
    }
    Matrix tail_sum = Matrix::Zero(dim, dim);
    Matrix tail_proj = Matrix::Zero(dim, dim);
    for (VertexId tv = 0; tv < t.graph.vertex_count(); ++tv) {
        const FVertex x = t.origin[tv];
        if (x.is_core()) {
            continue;
        }
        tail_sum += f.p.at(tv);
        const Eigen::Index b = block_of(x.v, x.depth);
        tail_proj.block(b, b, n, n) = fam.p.at(x.v) - r.at(x.v)[x.depth];
    }
    const double tail =
        std::max({max_abs(tail_sum - tail_proj), max_abs(tail_sum * tail_sum - tail_sum),
                  max_abs(tail_sum.block(0, 0, n, n))});
    out.bullets = {{"vertices", vertices}, {"regular_edges", regular}, {"alpha", alpha}, {"tail_projection", tail}};

    double mono = 0;
    for (const auto& [v0, rn] : r) {
        const Matrix& pv = fam.p.at(v0);
        for (std::uint64_t k = 0; k + 1 < rn.size(); ++k) {
            Eigen::SelfAdjointEigenSolver<Matrix> step(rn[k + 1] - rn[k], Eigen::EigenvaluesOnly);
            Eigen::SelfAdjointEigenSolver<Matrix> room(pv - rn[k + 1], Eigen::EigenvaluesOnly);
            mono = std::min({mono, step.eigenvalues().minCoeff(), room.eigenvalues().minCoeff()});
        }
    }
    out.monotonicity = mono;
    return out;
}

Matrix path_operator(const CKFamily& fam, const Path& mu, const Path& nu) {
    if (mu.range() != nu.range()) {
        throw Error("paths end at different vertices");
    }
    const auto op = [&](const Path& p) {
        Matrix x = fam.p.at(p.source());
        for (const EdgeRef& e : p.edges()) {
            x = x * fam.s.at(e);
        }
        return x;
    };
    return op(mu) * op(nu).adjoint();
}

EdgeRef truncated_edge(const TruncatedGraph& t, const FEdge& x) {
    for (BundleId b = 0; b < t.graph.bundle_count(); ++b) {
        const FEdge& o = t.edge_origin[b];
        if (o.kind != x.kind) {
            continue;
        }
        if (o.kind == FEdge::Kind::Core) {
            if (o.core_edge.bundle == x.core_edge.bundle) {
                return EdgeRef{b, x.core_edge.copy};
            }
        } else if (o.v0 == x.v0 && o.index == x.index) {
            return EdgeRef{b, 0};
        }
    }
    throw Error("edge lies outside the truncation");
}

Path truncated_path(const TruncatedGraph& t, const FPath& p) {
    const auto start = t.find(p.source());
    if (!start) {
        throw Error("path starts outside the truncation");
    }
    std::vector<EdgeRef> edges;
    for (const FEdge& e : p.edges()) {
        edges.push_back(truncated_edge(t, e));
    }
    return Path(t.graph, *start, std::move(edges));
}

Matrix corner_projection(const ExtensionResult& ext) {
    const TruncatedGraph& t = ext.truncation;
    const auto dim = static_cast<Eigen::Index>(ext.family.dim);
    Matrix p = Matrix::Zero(dim, dim);
    for (VertexId v = 0; v < t.graph.vertex_count(); ++v) {
        if (t.origin[v].is_core()) {
            p += ext.family.p.at(v);
        }
    }
    return p;
}

double corner_defect(const ExtensionResult& ext, const FPath& mu, const FPath& nu) {
    const TruncatedGraph& t = ext.truncation;
    const Path a = truncated_path(t, mu);
    const Path b = truncated_path(t, nu);
    const Matrix x = path_operator(ext.family, a, b);
    const auto dim = static_cast<Eigen::Index>(ext.family.dim);
    const Matrix p = corner_projection(ext);
    const bool core = mu.source().is_core() && nu.source().is_core();
    return max_abs(p * x * p - (core ? x : Matrix::Zero(dim, dim)));
}

bool corner_check(const ExtensionResult& ext, const FPath& mu, const FPath& nu) {
    return corner_defect(ext, mu, nu) <= ext.family.tol;
}

FPath untruncated_path(const DesingularizedGraph& d, const TruncatedGraph& t, const Path& p) {
    std::vector<FEdge> edges;
    for (const EdgeRef& e : p.edges()) {
        FEdge o = t.edge_origin[e.bundle];
        if (o.kind == FEdge::Kind::Core) {
            o.core_edge.copy = e.copy;
        }
        edges.push_back(o);
    }
    return FPath(d, t.origin[p.source()], std::move(edges));
}

CornerSample sample_corners(const ExtensionResult& ext, const DesingularizedGraph& d, std::uint64_t pairs,
                            std::uint64_t seed, std::size_t max_len) {
    const Graph& g = ext.truncation.graph;
    std::mt19937_64 rng(seed);
    CornerSample out;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const auto end = static_cast<VertexId>(rng() % g.vertex_count());
        const Path a = backward_walk(g, end, rng() % (max_len + 1), rng);
        const Path b = backward_walk(g, end, rng() % (max_len + 1), rng);
        const double x = corner_defect(ext, untruncated_path(d, ext.truncation, a),
                                       untruncated_path(d, ext.truncation, b));
        out.worst = std::max(out.worst, x);
        out.failures += x > ext.family.tol ? 1 : 0;
        ++out.pairs;
    }
    return out;
}

} // namespace ckgraph
