// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ckgraph/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <unordered_set>

#include "ckgraph/error.hpp"

namespace ckgraph {

Multiplicity Multiplicity::finite(std::uint64_t n) {
    if (n == 0) {
        throw Error("multiplicity must be at least 1");
    }
    return Multiplicity(n);
}

Graph::Graph(std::vector<std::string> vertex_names, std::vector<BundleSpec> bundles)
    : names_(std::move(vertex_names)) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) {
            throw Error("empty vertex name");
        }
        if (!seen.insert(n).second) {
            throw Error("duplicate vertex name '" + n + "'");
        }
    }
    out_.resize(names_.size());
    bundles_.reserve(bundles.size());
    for (auto& spec : bundles) {
        if (spec.source >= names_.size() || spec.target >= names_.size()) {
            throw Error("bundle endpoint out of range");
        }
        const auto id = static_cast<BundleId>(bundles_.size());
        bundles_.push_back(EdgeBundle{id, spec.source, spec.target, spec.mult, std::move(spec.label)});
        out_[spec.source].push_back(id);
    }

    reach_.assign(names_.size(), VertexSet(names_.size()));
    for (VertexId v = 0; v < names_.size(); ++v) {
        auto& r = reach_[v];
        std::vector<VertexId> stack{v};
        r.set(v);
        while (!stack.empty()) {
            const VertexId u = stack.back();
            stack.pop_back();
            for (const BundleId b : out_[u]) {
                const VertexId t = bundles_[b].target;
                if (!r.test(t)) {
                    r.set(t);
                    stack.push_back(t);
                }
            }
        }
    }
}

const std::string& Graph::name(VertexId v) const {
    check_vertex(v);
    return names_[v];
}

std::optional<VertexId> Graph::find(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return static_cast<VertexId>(it - names_.begin());
}

VertexId Graph::vertex(std::string_view name) const {
    if (auto v = find(name)) {
        return *v;
    }
    throw Error("unknown vertex '" + std::string(name) + "'");
}

const EdgeBundle& Graph::bundle(BundleId b) const {
    if (b >= bundles_.size()) {
        throw Error("unknown bundle id " + std::to_string(b));
    }
    return bundles_[b];
}

std::span<const BundleId> Graph::out_bundles(VertexId v) const {
    check_vertex(v);
    return out_[v];
}

bool Graph::is_edge(const EdgeRef& e) const noexcept {
    return e.bundle < bundles_.size() && bundles_[e.bundle].mult.admits(e.copy);
}

std::optional<std::uint64_t> Graph::out_degree(VertexId v) const {
    std::uint64_t total = 0;
    for (const BundleId b : out_bundles(v)) {
        if (bundles_[b].mult.is_omega()) {
            return std::nullopt;
        }
        total += bundles_[b].mult.count();
    }
    return total;
}

const VertexSet& Graph::reach_set(VertexId v) const {
    check_vertex(v);
    return reach_[v];
}

void Graph::check_vertex(VertexId v) const {
    if (v >= names_.size()) {
        throw Error("unknown vertex id " + std::to_string(v));
    }
}

// --- paths -----------------------------------------------------------------

Path::Path(const Graph& g, VertexId start, std::vector<EdgeRef> edges)
    : start_(start), end_(start), edges_(std::move(edges)) {
    g.check_vertex(start);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (!g.is_edge(e)) {
            throw Error("path edge " + std::to_string(i) + " does not exist");
        }
        if (g.source(e) != end_) {
            throw Error("path edges " + std::to_string(i) + " and its predecessor do not compose");
        }
        end_ = g.target(e);
    }
}

namespace {

VertexId first_source(const Graph& g, const std::vector<EdgeRef>& edges) {
    if (edges.empty()) {
        throw Error("use Path::at for an empty path");
    }
    if (!g.is_edge(edges.front())) {
        throw Error("path edge 0 does not exist");
    }
    return g.source(edges.front());
}

} // namespace

Path::Path(const Graph& g, std::vector<EdgeRef> edges) : Path(g, first_source(g, edges), edges) {}

std::vector<VertexId> Path::vertices(const Graph& g) const {
    std::vector<VertexId> out{start_};
    for (const auto& e : edges_) {
        out.push_back(g.target(e));
    }
    return out;
}

std::vector<VertexId> Path::sources(const Graph& g) const {
    std::vector<VertexId> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) {
        out.push_back(g.source(e));
    }
    return out;
}

Path Path::then(const Graph& g, const Path& other) const {
    if (end_ != other.start_) {
        throw Error("cannot concatenate paths: range and source differ");
    }
    auto edges = edges_;
    edges.insert(edges.end(), other.edges_.begin(), other.edges_.end());
    return Path(g, start_, std::move(edges));
}

Lasso::Lasso(Path p, Path c) : prefix(std::move(p)), cycle(std::move(c)) {
    if (!cycle.is_loop()) {
        throw Error("lasso cycle must be a nonempty loop");
    }
    if (prefix.range() != cycle.source()) {
        throw Error("lasso prefix must end at the cycle's base point");
    }
}

FinitePathToSingular::FinitePathToSingular(const Graph& g, Path p) : path(std::move(p)) {
    if (!is_singular(g, path.range())) {
        throw Error("finite eventual path must end at a singular vertex");
    }
}

VertexSet vertices_on(const Graph& g, const EventualPath& lambda) {
    VertexSet out = g.empty_set();
    const auto add = [&](const Path& p) {
        for (const VertexId v : p.vertices(g)) {
            out.set(v);
        }
    };
    if (const auto* l = std::get_if<Lasso>(&lambda)) {
        add(l->prefix);
        add(l->cycle);
    } else {
        add(std::get<FinitePathToSingular>(lambda).path);
    }
    return out;
}

VertexId source_of(const EventualPath& lambda) {
    if (const auto* l = std::get_if<Lasso>(&lambda)) {
        return l->prefix.source();
    }
    return std::get<FinitePathToSingular>(lambda).path.source();
}

// --- predicates ------------------------------------------------------------

bool is_sink(const Graph& g, VertexId v) { return g.out_bundles(v).empty(); }

bool is_infinite_emitter(const Graph& g, VertexId v) {
    const auto out = g.out_bundles(v);
    return std::any_of(out.begin(), out.end(), [&](BundleId b) { return g.bundle(b).mult.is_omega(); });
}

bool is_singular(const Graph& g, VertexId v) { return is_sink(g, v) || is_infinite_emitter(g, v); }

VertexSet singular_vertices(const Graph& g) {
    VertexSet out = g.empty_set();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (is_singular(g, v)) {
            out.set(v);
        }
    }
    return out;
}

bool is_row_finite(const Graph& g) {
    return std::none_of(g.bundles().begin(), g.bundles().end(),
                        [](const EdgeBundle& b) { return b.mult.is_omega(); });
}

bool reaches(const Graph& g, VertexId v, VertexId w) {
    g.check_vertex(w);
    return g.reach_set(v).test(w);
}

bool reaches_any(const Graph& g, VertexId v, const VertexSet& targets) {
    return g.reach_set(v).intersects(targets);
}

bool connects_to_eventual(const Graph& g, VertexId v, const EventualPath& lambda) {
    return reaches_any(g, v, vertices_on(g, lambda));
}

// --- loops -----------------------------------------------------------------

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap) { return std::min(cap, a + b); }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    if (a == 0 || b == 0) {
        return 0;
    }
    if (a >= cap || b >= cap) {
        return cap;
    }
    return std::min<std::uint64_t>(cap, a * b);
}

std::uint64_t mult_value(const Multiplicity& m, std::uint64_t cap) {
    return m.is_omega() ? cap : std::min(cap, m.count());
}

} // namespace

LoopCount simple_loops_based_at(const Graph& g, VertexId v, std::uint64_t cap) {
    g.check_vertex(v);
    if (cap < 2) {
        throw Error("simple_loops_based_at: cap must be at least 2");
    }
    const std::size_t n = g.vertex_count();

    // Vertices other than v that lie on some v -> ... -> v walk avoiding v in between.
    std::vector<std::vector<VertexId>> preds(n);
    for (const auto& b : g.bundles()) {
        preds[b.target].push_back(b.source);
    }
    VertexSet fwd(n);
    VertexSet bwd(n);
    std::vector<VertexId> stack;
    for (const BundleId b : g.out_bundles(v)) {
        const VertexId t = g.bundle(b).target;
        if (t != v && !fwd.test(t)) {
            fwd.set(t);
            stack.push_back(t);
        }
    }
    while (!stack.empty()) {
        const VertexId u = stack.back();
        stack.pop_back();
        for (const BundleId b : g.out_bundles(u)) {
            const VertexId t = g.bundle(b).target;
            if (t != v && !fwd.test(t)) {
                fwd.set(t);
                stack.push_back(t);
            }
        }
    }
    for (const VertexId p : preds[v]) {
        if (p != v && !bwd.test(p)) {
            bwd.set(p);
            stack.push_back(p);
        }
    }
    while (!stack.empty()) {
        const VertexId u = stack.back();
        stack.pop_back();
        for (const VertexId p : preds[u]) {
            if (p != v && !bwd.test(p)) {
                bwd.set(p);
                stack.push_back(p);
            }
        }
    }
    const VertexSet useful = fwd & bwd;

    // A cycle among useful vertices yields infinitely many simple loops at v.
    bool cyclic = false;
    std::vector<std::uint8_t> colour(n, 0);
    std::function<void(VertexId)> visit = [&](VertexId u) {
        colour[u] = 1;
        for (const BundleId b : g.out_bundles(u)) {
            const VertexId t = g.bundle(b).target;
            if (!useful.test(t) || cyclic) {
                continue;
            }
            if (colour[t] == 1) {
                cyclic = true;
            } else if (colour[t] == 0) {
                visit(t);
            }
        }
        colour[u] = 2;
    };
    for (auto u = useful.find_first(); u != VertexSet::npos && !cyclic; u = useful.find_next(u)) {
        if (colour[u] == 0) {
            visit(static_cast<VertexId>(u));
        }
    }

    LoopCount result;
    if (cyclic) {
        result.count = cap;
    } else {
        std::vector<std::optional<std::uint64_t>> memo(n);
        std::function<std::uint64_t(VertexId)> walks = [&](VertexId u) -> std::uint64_t {
            if (memo[u]) {
                return *memo[u];
            }
            std::uint64_t total = 0;
            for (const BundleId b : g.out_bundles(u)) {
                const auto& bundle = g.bundle(b);
                if (bundle.target == v) {
                    total = sat_add(total, mult_value(bundle.mult, cap), cap);
                } else if (useful.test(bundle.target)) {
                    total = sat_add(total, sat_mul(mult_value(bundle.mult, cap), walks(bundle.target), cap), cap);
                }
            }
            memo[u] = total;
            return total;
        };
        std::uint64_t total = 0;
        for (const BundleId b : g.out_bundles(v)) {
            const auto& bundle = g.bundle(b);
            if (bundle.target == v) {
                total = sat_add(total, mult_value(bundle.mult, cap), cap);
            } else if (useful.test(bundle.target)) {
                total = sat_add(total, sat_mul(mult_value(bundle.mult, cap), walks(bundle.target), cap), cap);
            }
        }
        result.count = total;
    }

    if (result.count == 0) {
        return result;
    }

    // Witnesses by iterative deepening over loop length; partial walks that
    // cannot return to v in the remaining steps are pruned.
    std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
    {
        std::deque<VertexId> queue;
        for (const VertexId p : preds[v]) {
            if ((p == v || useful.test(p)) && dist[p] == std::numeric_limits<std::size_t>::max()) {
                dist[p] = 1;
                queue.push_back(p);
            }
        }
        while (!queue.empty()) {
            const VertexId u = queue.front();
            queue.pop_front();
            for (const VertexId p : preds[u]) {
                if (p != v && useful.test(p) && dist[p] == std::numeric_limits<std::size_t>::max()) {
                    dist[p] = dist[u] + 1;
                    queue.push_back(p);
                }
            }
        }
    }
    const std::uint64_t wanted = result.count;
    std::vector<EdgeRef> walk;
    std::function<void(VertexId, std::size_t)> extend = [&](VertexId u, std::size_t remaining) {
        for (const BundleId b : g.out_bundles(u)) {
            if (result.witnesses.size() >= wanted) {
                return;
            }
            const auto& bundle = g.bundle(b);
            const bool closes = bundle.target == v;
            if (closes ? remaining != 1 : (!useful.test(bundle.target) || dist[bundle.target] > remaining - 1)) {
                continue;
            }
            const std::uint64_t copies =
                bundle.mult.is_omega() ? wanted : std::min<std::uint64_t>(bundle.mult.count(), wanted);
            for (std::uint64_t c = 0; c < copies && result.witnesses.size() < wanted; ++c) {
                walk.push_back(EdgeRef{b, c});
                if (closes) {
                    result.witnesses.emplace_back(g, v, walk);
                } else {
                    extend(bundle.target, remaining - 1);
                }
                walk.pop_back();
            }
        }
    };
    for (std::size_t length = 1; result.witnesses.size() < wanted; ++length) {
        extend(v, length);
    }
    return result;
}

bool loop_has_exit(const Graph& g, const Path& loop) {
    if (!loop.is_loop()) {
        throw Error("loop_has_exit: path is not a loop");
    }
    for (const VertexId s : loop.sources(g)) {
        const auto d = g.out_degree(s);
        if (!d || *d >= 2) {
            return true;
        }
    }
    return false;
}

std::optional<Path> shortest_path(const Graph& g, VertexId v, VertexId w) {
    g.check_vertex(v);
    g.check_vertex(w);
    if (v == w) {
        return Path::at(g, v);
    }
    std::vector<std::optional<BundleId>> parent(g.vertex_count());
    VertexSet seen = g.empty_set();
    seen.set(v);
    std::deque<VertexId> queue{v};
    while (!queue.empty()) {
        const VertexId u = queue.front();
        queue.pop_front();
        for (const BundleId b : g.out_bundles(u)) {
            const VertexId t = g.bundle(b).target;
            if (seen.test(t)) {
                continue;
            }
            seen.set(t);
            parent[t] = b;
            if (t == w) {
                std::vector<EdgeRef> edges;
                for (VertexId x = w; x != v; x = g.bundle(*parent[x]).source) {
                    edges.push_back(EdgeRef{*parent[x], 0});
                }
                std::reverse(edges.begin(), edges.end());
                return Path(g, v, std::move(edges));
            }
            queue.push_back(t);
        }
    }
    return std::nullopt;
}

std::optional<Path> cycle_through(const Graph& g, VertexId v) {
    std::optional<Path> best;
    for (const BundleId b : g.out_bundles(v)) {
        const VertexId t = g.bundle(b).target;
        if (auto back = shortest_path(g, t, v)) {
            Path candidate = Path(g, v, {EdgeRef{b, 0}}).then(g, *back);
            if (!best || candidate.size() < best->size()) {
                best = std::move(candidate);
            }
        }
    }
    return best;
}

bool on_cycle(const Graph& g, VertexId v) {
    for (const BundleId b : g.out_bundles(v)) {
        if (g.reach_set(g.bundle(b).target).test(v)) {
            return true;
        }
    }
    return false;
}

std::vector<VertexId> cyclic_component_roots(const Graph& g) {
    std::vector<VertexId> roots;
    VertexSet done = g.empty_set();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (done.test(v)) {
            continue;
        }
        for (VertexId w = v; w < g.vertex_count(); ++w) {
            if (g.reach_set(v).test(w) && g.reach_set(w).test(v)) {
                done.set(w);
            }
        }
        if (on_cycle(g, v)) {
            roots.push_back(v);
        }
    }
    return roots;
}

} // namespace ckgraph
