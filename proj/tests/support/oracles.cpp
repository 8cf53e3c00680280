// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

using ckgraph::Graph;
using ckgraph::VertexId;

Matrix multiplicity_matrix(const Graph& g, std::uint64_t omega_as) {
    const std::size_t n = g.vertex_count();
    Matrix m(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& b : g.bundles()) {
        m[b.source][b.target] += b.mult.is_omega() ? omega_as : b.mult.count();
    }
    return m;
}

std::vector<std::vector<bool>> reach_matrix(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        r[i][i] = true;
    }
    for (const auto& b : g.bundles()) {
        r[b.source][b.target] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (r[i][k] && r[k][j]) {
                    r[i][j] = true;
                }
            }
        }
    }
    return r;
}

std::uint64_t out_multiplicity(const Graph& g, VertexId v) {
    std::uint64_t total = 0;
    for (const auto& b : g.bundles()) {
        if (b.source == v) {
            total += b.mult.is_omega() ? 2 : b.mult.count();
        }
    }
    return std::min<std::uint64_t>(total, 2);
}

std::uint64_t simple_loop_count(const Graph& g, VertexId v) {
    const std::size_t n = g.vertex_count();
    const Matrix a = multiplicity_matrix(g, 2);
    std::vector<std::uint64_t> x(n, 0);
    for (std::size_t u = 0; u < n; ++u) {
        x[u] = std::min<std::uint64_t>(a[v][u], 2);
    }
    std::uint64_t loops = 0;
    for (std::size_t step = 0; step < 2 * n + 1; ++step) {
        loops = std::min<std::uint64_t>(loops + x[v], 2);
        std::vector<std::uint64_t> next(n, 0);
        for (std::size_t w = 0; w < n; ++w) {
            if (w == v || x[w] == 0) {
                continue;
            }
            for (std::size_t u = 0; u < n; ++u) {
                next[u] = std::min<std::uint64_t>(next[u] + x[w] * a[w][u], 2);
            }
        }
        x = std::move(next);
    }
    return loops;
}

std::vector<std::vector<VertexId>> simple_cycles(const Graph& g) {
    const std::size_t n = g.vertex_count();
    const Matrix a = multiplicity_matrix(g, 1);
    std::vector<std::vector<VertexId>> out;
    std::vector<VertexId> stack;
    std::vector<bool> on(n, false);
    // Cycles whose smallest vertex is `root`.
    std::function<void(VertexId, VertexId)> dfs = [&](VertexId root, VertexId u) {
        for (VertexId w = root; w < n; ++w) {
            if (a[u][w] == 0) {
                continue;
            }
            if (w == root) {
                out.push_back(stack);
            } else if (!on[w]) {
                on[w] = true;
                stack.push_back(w);
                dfs(root, w);
                stack.pop_back();
                on[w] = false;
            }
        }
    };
    for (VertexId root = 0; root < n; ++root) {
        stack = {root};
        on.assign(n, false);
        on[root] = true;
        dfs(root, root);
    }
    return out;
}

bool condition_L(const Graph& g) {
    for (const auto& cycle : simple_cycles(g)) {
        const bool exitless = std::all_of(cycle.begin(), cycle.end(),
                                          [&](VertexId u) { return out_multiplicity(g, u) == 1; });
        if (exitless) {
            return false;
        }
    }
    return true;
}

bool condition_K(const Graph& g) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (simple_loop_count(g, v) == 1) {
            return false;
        }
    }
    return true;
}

namespace {

std::vector<bool> cyclic_vertices(const Graph& g) {
    const auto r = reach_matrix(g);
    const std::size_t n = g.vertex_count();
    std::vector<bool> c(n, false);
    for (const auto& b : g.bundles()) {
        if (r[b.target][b.source]) {
            c[b.source] = true;
        }
    }
    return c;
}

bool singular(const Graph& g, VertexId v) {
    bool any = false;
    for (const auto& b : g.bundles()) {
        if (b.source == v) {
            any = true;
            if (b.mult.is_omega()) {
                return true;
            }
        }
    }
    return !any;
}

} // namespace

bool cofinal(const Graph& g) {
    const auto r = reach_matrix(g);
    const auto c = cyclic_vertices(g);
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
        for (std::size_t w = 0; w < g.vertex_count(); ++w) {
            if (c[w] && !r[u][w]) {
                return false;
            }
        }
    }
    return true;
}

bool all_singular_reachable(const Graph& g) {
    const auto r = reach_matrix(g);
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
        for (VertexId w = 0; w < g.vertex_count(); ++w) {
            if (singular(g, w) && !r[u][w]) {
                return false;
            }
        }
    }
    return true;
}

bool af(const Graph& g) {
    const auto c = cyclic_vertices(g);
    return std::none_of(c.begin(), c.end(), [](bool b) { return b; });
}

bool purely_infinite(const Graph& g) {
    if (!condition_L(g)) {
        return false;
    }
    const auto r = reach_matrix(g);
    const auto c = cyclic_vertices(g);
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
        bool hit = false;
        for (std::size_t w = 0; w < g.vertex_count(); ++w) {
            hit = hit || (c[w] && r[u][w]);
        }
        if (!hit) {
            return false;
        }
    }
    return true;
}

std::vector<std::uint64_t> saturated_hereditary_masks(const Graph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::uint64_t> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto in = [&](VertexId v) { return ((mask >> v) & 1U) != 0; };
        bool ok = true;
        for (const auto& b : g.bundles()) {
            ok = ok && (!in(b.source) || in(b.target));
        }
        for (VertexId v = 0; v < n && ok; ++v) {
            if (in(v) || singular(g, v)) {
                continue;
            }
            bool inside = true;
            for (const auto& b : g.bundles()) {
                inside = inside && (b.source != v || in(b.target));
            }
            ok = !inside;
        }
        if (ok) {
            out.push_back(mask);
        }
    }
    return out;
}

} // namespace oracle
