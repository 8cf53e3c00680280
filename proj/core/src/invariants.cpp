// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ckgraph/invariants.hpp"

#include <cassert>

#include "ckgraph/error.hpp"

namespace ckgraph {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::ConditionL:
        return "condition_L";
    case Verdict::ConditionK:
        return "condition_K";
    case Verdict::Cofinal:
        return "cofinal";
    case Verdict::AllSingularReachable:
        return "all_singular_reachable";
    case Verdict::AF:
        return "af";
    case Verdict::PurelyInfinite:
        return "purely_infinite";
    case Verdict::Simple:
        return "simple";
    }
    return "?";
}

namespace {

// The unique outgoing bundle of a vertex with exactly one outgoing edge.
std::optional<BundleId> sole_out_bundle(const Graph& g, VertexId v) {
    const auto d = g.out_degree(v);
    if (!d || *d != 1) {
        return std::nullopt;
    }
    return g.out_bundles(v).front();
}

std::string vname(const Graph& g, VertexId v) { return g.name(v); }

} // namespace

// An exitless loop visits only vertices of out-degree one, so it is the cycle
// reached by following sole successors; which copy of an omega bundle a loop
// uses never matters since any omega bundle is already an exit.
Decision<bool> condition_L(const Graph& g) {
    const std::size_t n = g.vertex_count();
    for (VertexId start = 0; start < n; ++start) {
        std::vector<EdgeRef> walk;
        VertexId v = start;
        for (std::size_t step = 0; step < n; ++step) {
            const auto b = sole_out_bundle(g, v);
            if (!b) {
                break;
            }
            walk.push_back(EdgeRef{*b, 0});
            v = g.bundle(*b).target;
            if (v == start) {
                Path loop(g, start, walk);
                return {false, Witness{"loop at " + vname(g, start) + " has no exit", start, loop, std::nullopt}};
            }
        }
    }
    return {true, std::nullopt};
}

Decision<bool> condition_K(const Graph& g) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto loops = simple_loops_based_at(g, v, 2);
        if (loops.count == 1) {
            return {false, Witness{vname(g, v) + " is the base of exactly one simple loop", v,
                                   loops.witnesses.front(), std::nullopt}};
        }
    }
    return {true, std::nullopt};
}

// An infinite path in a finite graph visits some vertex infinitely often, so
// its vertex set contains a cycle; conversely each cycle c gives the infinite
// path c c c .... Hence E^0 >= lambda for all infinite lambda iff every vertex
// reaches every cyclic strongly connected component.
Decision<bool> is_cofinal(const Graph& g) {
    for (const VertexId root : cyclic_component_roots(g)) {
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (!reaches(g, v, root)) {
                return {false, Witness{vname(g, v) + " does not reach the cycle through " + vname(g, root), v,
                                       cycle_through(g, root), root}};
            }
        }
    }
    return {true, std::nullopt};
}

Decision<bool> all_singular_reachable(const Graph& g) {
    const VertexSet singular = singular_vertices(g);
    for (auto s = singular.find_first(); s != VertexSet::npos; s = singular.find_next(s)) {
        const auto target = static_cast<VertexId>(s);
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (!reaches(g, v, target)) {
                return {false, Witness{vname(g, v) + " does not reach singular vertex " + vname(g, target), v,
                                       std::nullopt, target}};
            }
        }
    }
    return {true, std::nullopt};
}

Decision<bool> verdict_af(const Graph& g) {
    const auto roots = cyclic_component_roots(g);
    if (roots.empty()) {
        return {true, std::nullopt};
    }
    return {false, Witness{"graph has a loop at " + vname(g, roots.front()), roots.front(),
                           cycle_through(g, roots.front()), std::nullopt}};
}

Decision<bool> verdict_purely_infinite(const Graph& g) {
    auto L = condition_L(g);
    if (!L.value) {
        return L;
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        bool hits = false;
        for (const VertexId root : cyclic_component_roots(g)) {
            hits = hits || reaches(g, v, root);
        }
        if (!hits) {
            return {false, Witness{vname(g, v) + " does not connect to a loop", v, std::nullopt, std::nullopt}};
        }
    }
    return {true, std::nullopt};
}

Decision<bool> verdict_simple(const Graph& g) {
    if (auto L = condition_L(g); !L.value) {
        return L;
    }
    if (auto c = is_cofinal(g); !c.value) {
        return c;
    }
    return all_singular_reachable(g);
}

bool VerdictReport::value(Verdict v) const {
    switch (v) {
    case Verdict::ConditionL:
        return condition_L;
    case Verdict::ConditionK:
        return condition_K;
    case Verdict::Cofinal:
        return cofinal;
    case Verdict::AllSingularReachable:
        return all_singular_reachable;
    case Verdict::AF:
        return af;
    case Verdict::PurelyInfinite:
        return purely_infinite;
    case Verdict::Simple:
        return simple;
    }
    return false;
}

VerdictReport full_report(const Graph& g) {
    VerdictReport r;
    const auto record = [&](Verdict v, Decision<bool> d, bool& field) {
        field = d.value;
        if (!d.value) {
            assert(d.witness);
            r.witnesses.emplace(v, std::move(*d.witness));
        }
    };
    record(Verdict::ConditionL, condition_L(g), r.condition_L);
    record(Verdict::ConditionK, condition_K(g), r.condition_K);
    record(Verdict::Cofinal, is_cofinal(g), r.cofinal);
    record(Verdict::AllSingularReachable, all_singular_reachable(g), r.all_singular_reachable);
    record(Verdict::AF, verdict_af(g), r.af);
    record(Verdict::PurelyInfinite, verdict_purely_infinite(g), r.purely_infinite);
    record(Verdict::Simple, verdict_simple(g), r.simple);
    return r;
}

bool witness_is_valid(const Graph& g, Verdict v, const Witness& w) {
    const auto loop_without_exit = [&] { return w.loop && w.loop->is_loop() && !loop_has_exit(g, *w.loop); };
    const auto missed_cycle = [&] {
        return w.vertex && w.loop && w.loop->is_loop() &&
               !connects_to_eventual(g, *w.vertex, Lasso(Path::at(g, w.loop->source()), *w.loop));
    };
    const auto missed_singular = [&] {
        return w.vertex && w.target && is_singular(g, *w.target) && !reaches(g, *w.vertex, *w.target);
    };
    const auto no_loop_reached = [&] {
        if (!w.vertex) {
            return false;
        }
        for (const VertexId root : cyclic_component_roots(g)) {
            if (reaches(g, *w.vertex, root)) {
                return false;
            }
        }
        return true;
    };
    switch (v) {
    case Verdict::ConditionL:
        return loop_without_exit();
    case Verdict::ConditionK:
        return w.vertex && w.loop && w.loop->is_loop() && w.loop->source() == *w.vertex &&
               simple_loops_based_at(g, *w.vertex, 2).count == 1;
    case Verdict::Cofinal:
        return missed_cycle();
    case Verdict::AllSingularReachable:
        return missed_singular();
    case Verdict::AF:
        return w.loop && w.loop->is_loop();
    case Verdict::PurelyInfinite:
        return loop_without_exit() || no_loop_reached();
    case Verdict::Simple:
        return loop_without_exit() || missed_cycle() || missed_singular();
    }
    return false;
}

} // namespace ckgraph
