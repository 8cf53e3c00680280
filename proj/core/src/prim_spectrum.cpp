// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include <ckgraph/prim_spectrum.hpp>

#include <algorithm>
#include <random>

#include <ckgraph/error.hpp>
#include <ckgraph/invariants.hpp>

namespace ckgraph {

namespace {

std::vector<VertexId> members(const VertexSet& x) {
    std::vector<VertexId> out;
    for (auto i = x.find_first(); i != VertexSet::npos; i = x.find_next(i)) {
        out.push_back(static_cast<VertexId>(i));
    }
    return out;
}

// Vertices reaching some vertex of x.
VertexSet coreach(const Graph& g, const VertexSet& x) {
    VertexSet out = g.empty_set();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.reach_set(v).intersects(x)) {
            out.set(v);
        }
    }
    return out;
}

void require_K(const Graph& g) {
    const auto k = condition_K(g);
    if (!k.value) {
        throw ConditionKError("graph fails Condition (K): " + k.witness->description);
    }
}

// E^0 \ h(x) read back as a pair, without the Condition (K) check.
AdmissiblePair pair_of(const Graph& g, const XiElement& x) {
    if (const auto* t = std::get_if<MaximalTail>(&x)) {
        const VertexSet h = ~t->gamma;
        return AdmissiblePair{h, breaking_candidates_BH(g, h)};
    }
    const VertexId v0 = std::get<BreakingVertex>(x).v0;
    const VertexSet h = ~lambda_of(g, v0);
    VertexSet s = breaking_candidates_BH(g, h);
    s.reset(v0);
    return AdmissiblePair{h, s};
}

// Singular vertices whose entire added tail lies in h(x).
VertexSet whole_tails(const Graph& g, const AdmissiblePair& p) {
    return singular_vertices(g) & ~p.H & ~p.S;
}

struct ArrowTarget {
    VertexSet reach;  // vertices reaching the union of the cores
    VertexSet tails;  // singular vertices with a whole tail in the union
    VertexSet literal; // coreach of {lambda} u {v0}
};

ArrowTarget arrow_target(const Graph& g, const std::vector<XiElement>& targets) {
    VertexSet cores = g.empty_set();
    ArrowTarget t{g.empty_set(), g.empty_set(), g.empty_set()};
    VertexSet literal = g.empty_set();
    for (const XiElement& x : targets) {
        const AdmissiblePair p = pair_of(g, x);
        cores |= ~p.H;
        t.tails |= whole_tails(g, p);
        if (const auto* t2 = std::get_if<MaximalTail>(&x)) {
            literal |= t2->gamma;
        } else {
            literal.set(std::get<BreakingVertex>(x).v0);
        }
    }
    t.reach = coreach(g, cores);
    t.literal = coreach(g, literal);
    return t;
}

bool omega_into(const Graph& g, VertexId v, const VertexSet& x) {
    for (const BundleId b : g.out_bundles(v)) {
        if (g.bundle(b).mult.is_omega() && x.test(g.bundle(b).target)) {
            return true;
        }
    }
    return false;
}

bool arrow_to(const Graph& g, const XiElement& delta, const ArrowTarget& t) {
    const AdmissiblePair p = pair_of(g, delta);
    if (!(~p.H).is_subset_of(t.reach)) {
        return false;
    }
    for (const VertexId u0 : members(whole_tails(g, p))) {
        if (!omega_into(g, u0, t.reach) && !t.tails.test(u0)) {
            return false;
        }
    }
    return true;
}

bool size_then_members_less(const VertexSet& a, const VertexSet& b) {
    if (a.count() != b.count()) {
        return a.count() < b.count();
    }
    return members(a) < members(b);
}

} // namespace

VertexSet lambda_of(const Graph& g, VertexId v0) {
    g.check_vertex(v0);
    VertexSet out = g.empty_set();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (reaches(g, v, v0)) {
            out.set(v);
        }
    }
    return out;
}

bool is_maximal_tail(const Graph& g, const VertexSet& gamma) {
    if (gamma.size() != g.vertex_count()) {
        throw Error("vertex set does not match the graph");
    }
    if (gamma.none()) {
        return false;
    }
    const auto in = members(gamma);
    // (c)
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!gamma.test(v) && g.reach_set(v).intersects(gamma)) {
            return false;
        }
    }
    // (b)
    for (const VertexId v : in) {
        if (is_singular(g, v)) {
            continue;
        }
        bool inside = false;
        for (const BundleId b : g.out_bundles(v)) {
            inside = inside || gamma.test(g.bundle(b).target);
        }
        if (!inside) {
            return false;
        }
    }
    // (a)
    for (const VertexId a : in) {
        for (const VertexId b : in) {
            if (!(g.reach_set(a) & g.reach_set(b) & gamma).any()) {
                return false;
            }
        }
    }
    return true;
}

EventualPath maximal_tail_witness(const Graph& g, const VertexSet& gamma) {
    if (!is_maximal_tail(g, gamma)) {
        throw Error("not a maximal tail");
    }
    const auto in = members(gamma);
    VertexId c = in.front();
    Path beta = Path::at(g, c);
    // Walk until every vertex of gamma reaches c. Each step strictly grows the
    // set of gamma-vertices reaching c.
    while (true) {
        std::optional<VertexId> missing;
        for (const VertexId w : in) {
            if (!reaches(g, w, c)) {
                missing = w;
                break;
            }
        }
        if (!missing) {
            break;
        }
        const VertexSet common = g.reach_set(c) & g.reach_set(*missing) & gamma;
        std::optional<Path> best;
        for (const VertexId z : members(common)) {
            auto p = shortest_path(g, c, z);
            if (p && (!best || p->size() < best->size())) {
                best = std::move(p);
            }
        }
        beta = beta.then(g, *best);
        c = beta.range();
    }
    // Follow edges inside gamma until a vertex repeats or none is left.
    std::vector<VertexId> seen{c};
    std::vector<EdgeRef> ext;
    while (true) {
        std::optional<EdgeRef> next;
        for (const BundleId b : g.out_bundles(c)) {
            if (gamma.test(g.bundle(b).target)) {
                next = EdgeRef{b, 0};
                break;
            }
        }
        if (!next) {
            // (b) forces c to be singular here.
            return FinitePathToSingular(g, beta.then(g, Path(g, seen.front(), ext)));
        }
        ext.push_back(*next);
        c = g.target(*next);
        const auto at = std::find(seen.begin(), seen.end(), c);
        if (at != seen.end()) {
            const auto k = static_cast<std::size_t>(at - seen.begin());
            const Path lead(g, seen.front(), {ext.begin(), ext.begin() + static_cast<std::ptrdiff_t>(k)});
            const Path cycle(g, c, {ext.begin() + static_cast<std::ptrdiff_t>(k), ext.end()});
            return Lasso(beta.then(g, lead), cycle);
        }
        seen.push_back(c);
    }
}

std::vector<MaximalTail> enumerate_maximal_tails(const Graph& g) {
    const std::size_t n = g.vertex_count();
    if (n > 24) {
        throw Error("too many vertices to enumerate maximal tails");
    }
    std::vector<VertexSet> found;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const VertexSet x(n, mask);
        if (is_maximal_tail(g, x)) {
            found.push_back(x);
        }
    }
    std::sort(found.begin(), found.end(), size_then_members_less);
    std::vector<MaximalTail> out;
    for (const auto& x : found) {
        out.push_back(MaximalTail{x, maximal_tail_witness(g, x)});
    }
    return out;
}

std::vector<BreakingVertex> breaking_vertices(const Graph& g) {
    std::vector<BreakingVertex> out;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!is_infinite_emitter(g, v)) {
            continue;
        }
        BreakingVertex bv{v, {}};
        bool infinite = false;
        for (const BundleId b : g.out_bundles(v)) {
            const auto& bundle = g.bundle(b);
            if (!reaches(g, bundle.target, v)) {
                continue;
            }
            if (bundle.mult.is_omega()) {
                infinite = true;
                break;
            }
            for (std::uint64_t c = 0; c < bundle.mult.count(); ++c) {
                bv.returning_edges.push_back(EdgeRef{b, c});
            }
        }
        if (!infinite && !bv.returning_edges.empty()) {
            out.push_back(std::move(bv));
        }
    }
    return out;
}

std::vector<XiElement> enumerate_xi(const Graph& g) {
    std::vector<XiElement> out;
    for (auto& t : enumerate_maximal_tails(g)) {
        out.emplace_back(std::move(t));
    }
    for (auto& b : breaking_vertices(g)) {
        out.emplace_back(std::move(b));
    }
    return out;
}

std::string describe(const Graph& g, const XiElement& x) {
    if (const auto* t = std::get_if<MaximalTail>(&x)) {
        return "tail " + describe(g, t->gamma);
    }
    return "breaking " + g.name(std::get<BreakingVertex>(x).v0);
}

Classification classify_primitive(const Graph& g, const AdmissiblePair& p) {
    require_K(g);
    validate_pair(g, p);
    const VertexSet rest = ~p.H;
    const VertexSet b = breaking_candidates_BH(g, p.H);
    if (is_maximal_tail(g, rest) && p.S == b) {
        return {Classification::Kind::Case1, std::nullopt};
    }
    for (const auto& bv : breaking_vertices(g)) {
        VertexSet s = b;
        s.reset(bv.v0);
        if (rest == lambda_of(g, bv.v0) && p.S == s) {
            return {Classification::Kind::Case2, bv.v0};
        }
    }
    return {};
}

AdmissiblePair phi_E(const Graph& g, const XiElement& x) {
    require_K(g);
    return pair_of(g, x);
}

bool arrow(const Graph& g, const XiElement& delta, const std::vector<XiElement>& targets) {
    return arrow_to(g, delta, arrow_target(g, targets));
}

bool arrow_literal(const Graph& g, const XiElement& delta, const std::vector<XiElement>& targets) {
    const ArrowTarget t = arrow_target(g, targets);
    if (const auto* tail = std::get_if<MaximalTail>(&delta)) {
        return tail->gamma.is_subset_of(t.literal);
    }
    return omega_into(g, std::get<BreakingVertex>(delta).v0, t.literal);
}

PointMask closure(const Graph& g, const std::vector<XiElement>& points, PointMask a) {
    if (a == 0) {
        return 0;
    }
    std::vector<XiElement> targets;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if ((a >> i) & 1U) {
            targets.push_back(points[i]);
        }
    }
    const ArrowTarget t = arrow_target(g, targets);
    PointMask out = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (arrow_to(g, points[i], t)) {
            out |= PointMask{1} << i;
        }
    }
    return out;
}

PrimSpace::PrimSpace(Graph g) : g_(std::move(g)) {
    require_K(g_);
    points_ = enumerate_xi(g_);
    if (points_.size() > 63) {
        throw Error("too many points in the primitive spectrum");
    }
    special_.assign(points_.size(), std::vector<bool>(points_.size(), false));
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const PointMask c = ckgraph::closure(g_, points_, PointMask{1} << i);
        for (std::size_t j = 0; j < points_.size(); ++j) {
            special_[i][j] = ((c >> j) & 1U) != 0;
        }
    }
}

PointMask PrimSpace::closure(PointMask a) const {
    return ckgraph::closure(g_, points_, a);
}

KuratowskiReport check_kuratowski(const PrimSpace& space, std::uint64_t samples, std::uint64_t seed) {
    KuratowskiReport r;
    const std::size_t n = space.size();
    const auto fail = [&](bool& flag, const std::string& what, PointMask a) {
        flag = false;
        if (r.failures.size() < 16) {
            r.failures.push_back(what + " fails at mask " + std::to_string(a));
        }
    };
    if (space.closure(0) != 0) {
        fail(r.empty_closed, "cl(empty) = empty", 0);
    }
    const auto check_one = [&](PointMask a, PointMask ca) {
        if ((a & ~ca) != 0) {
            fail(r.extensive, "A in cl(A)", a);
        }
        if (space.closure(ca) != ca) {
            fail(r.idempotent, "cl(cl(A)) = cl(A)", a);
        }
    };
    if (n <= 12) {
        const PointMask all = PointMask{1} << n;
        std::vector<PointMask> cl(all);
        for (PointMask a = 0; a < all; ++a) {
            cl[a] = space.closure(a);
            check_one(a, cl[a]);
        }
        for (PointMask a = 0; a < all; ++a) {
            for (PointMask b = a; b < all; ++b) {
                if (cl[a | b] != (cl[a] | cl[b])) {
                    fail(r.additive, "cl(A u B) = cl(A) u cl(B) with B = " + std::to_string(b), a);
                }
            }
        }
        r.subsets = all;
        return r;
    }
    std::mt19937_64 rng(seed);
    const PointMask full = n == 64 ? ~PointMask{0} : (PointMask{1} << n) - 1;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const PointMask a = rng() & full;
        const PointMask b = rng() & full;
        const PointMask ca = space.closure(a);
        check_one(a, ca);
        if (space.closure(a | b) != (ca | space.closure(b))) {
            fail(r.additive, "cl(A u B) = cl(A) u cl(B)", a);
        }
    }
    r.subsets = samples;
    return r;
}

FVertexSet h_map(const DesingularizedGraph& d, const XiElement& x) {
    if (const auto* t = std::get_if<MaximalTail>(&x)) {
        return f_coreach(d, f_vertices_on(d, phi_infinity(d, t->witness)));
    }
    FVertexSet tail = f_empty_set(d);
    tail.tails.at(std::get<BreakingVertex>(x).v0) = TailSubset::all();
    return f_coreach(d, tail);
}

bool f_arrow(const DesingularizedGraph& d, const XiElement& delta, const std::vector<XiElement>& targets) {
    FVertexSet u = f_empty_set(d);
    for (const XiElement& x : targets) {
        u = u | h_map(d, x);
    }
    return h_map(d, delta).subset_of(f_coreach(d, u));
}

} // namespace ckgraph
