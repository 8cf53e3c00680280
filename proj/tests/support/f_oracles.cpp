// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "f_oracles.hpp"

#include <algorithm>

#include "oracles.hpp"

namespace oracle {

std::uint64_t truncation_depth(const ckgraph::DesingularizedGraph& d) {
    return std::max<std::uint64_t>(8, d.window());
}

bool truncated_condition_L(const ckgraph::DesingularizedGraph& d) {
    return condition_L(ckgraph::truncate(d, truncation_depth(d)).graph);
}

bool truncated_condition_K(const ckgraph::DesingularizedGraph& d) {
    const std::uint64_t depth = truncation_depth(d);
    const auto t = ckgraph::truncate(d, depth);
    for (ckgraph::VertexId i = 0; i < t.graph.vertex_count(); ++i) {
        const auto x = t.origin[i];
        if (!x.is_core()) {
            const auto l = d.tail(x.v).period_size();
            if (x.depth + 2 * l + 1 > depth) {
                continue;
            }
        }
        if (simple_loop_count(t.graph, i) == 1) {
            return false;
        }
    }
    return true;
}

bool truncated_sat_hered(const ckgraph::DesingularizedGraph& d, const ckgraph::FVertexSet& x, std::uint64_t depth) {
    const auto t = ckgraph::truncate(d, depth);
    const auto& g = t.graph;
    std::vector<bool> in(g.vertex_count());
    for (ckgraph::VertexId v = 0; v < g.vertex_count(); ++v) {
        in[v] = x.contains(t.origin[v]);
    }
    for (ckgraph::VertexId v = 0; v < g.vertex_count(); ++v) {
        if (t.boundary.test(v)) {
            continue;
        }
        bool all_in = true;
        for (const auto& b : g.bundles()) {
            if (b.source == v && !in[b.target]) {
                all_in = false;
            }
        }
        if (in[v] != all_in) {
            return false;
        }
    }
    return true;
}

} // namespace oracle
