// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ckgraph/desingularize.hpp"

#include <algorithm>
#include <set>

#include "ckgraph/error.hpp"

namespace ckgraph {

// ---------------------------------------------------------------- TailSpec

bool TailSpec::has_edge(std::uint64_t j) const noexcept {
    return j >= 1 && (j <= preamble_size() || !period.empty());
}

EdgeRef TailSpec::edge(std::uint64_t j) const {
    if (!has_edge(j)) {
        throw Error("tail has no edge g_" + std::to_string(j));
    }
    if (j <= preamble_size()) {
        return preamble[j - 1];
    }
    const std::uint64_t k = j - preamble_size() - 1;
    return EdgeRef{period[k % period_size()], k / period_size()};
}

std::uint64_t TailSpec::index_of(const EdgeRef& e) const {
    for (std::size_t i = 0; i < preamble.size(); ++i) {
        if (preamble[i] == e) {
            return i + 1;
        }
    }
    for (std::size_t q = 0; q < period.size(); ++q) {
        if (period[q] == e.bundle) {
            return preamble_size() + e.copy * period_size() + q + 1;
        }
    }
    throw Error("edge is not enumerated by the tail");
}

TailSpec canonical_tailspec(const Graph& g, VertexId v0) {
    g.check_vertex(v0);
    if (!is_singular(g, v0)) {
        throw Error("vertex " + g.name(v0) + " is not singular");
    }
    TailSpec spec;
    spec.v0 = v0;
    for (const BundleId b : g.out_bundles(v0)) {
        const auto& m = g.bundle(b).mult;
        if (m.is_omega()) {
            spec.period.push_back(b);
        } else {
            for (std::uint64_t c = 0; c < m.count(); ++c) {
                spec.preamble.push_back(EdgeRef{b, c});
            }
        }
    }
    return spec;
}

void validate_tailspec(const Graph& g, const TailSpec& spec) {
    g.check_vertex(spec.v0);
    const std::string at = "tail at " + g.name(spec.v0) + ": ";
    if (!is_singular(g, spec.v0)) {
        throw Error(at + "vertex is not singular");
    }
    std::set<EdgeRef> seen;
    for (const EdgeRef& e : spec.preamble) {
        if (!g.is_edge(e) || g.source(e) != spec.v0) {
            throw Error(at + "preamble names an edge that does not leave the vertex");
        }
        if (g.bundle(e.bundle).mult.is_omega()) {
            throw Error(at + "omega bundles belong in the period");
        }
        if (!seen.insert(e).second) {
            throw Error(at + "preamble repeats an edge");
        }
    }
    std::set<BundleId> omega;
    for (const BundleId b : spec.period) {
        if (b >= g.bundle_count() || g.bundle(b).source != spec.v0 || !g.bundle(b).mult.is_omega()) {
            throw Error(at + "period names a bundle that is not an omega bundle of the vertex");
        }
        if (!omega.insert(b).second) {
            throw Error(at + "period repeats a bundle");
        }
    }
    std::uint64_t finite = 0;
    std::size_t omega_count = 0;
    for (const BundleId b : g.out_bundles(spec.v0)) {
        const auto& m = g.bundle(b).mult;
        if (m.is_omega()) {
            ++omega_count;
        } else {
            finite += m.count();
        }
    }
    if (finite != spec.preamble.size()) {
        throw Error(at + "preamble does not list every finite edge");
    }
    if (omega_count != spec.period.size()) {
        throw Error(at + "period does not list every omega bundle");
    }
}

// ------------------------------------------------------ DesingularizedGraph

DesingularizedGraph::DesingularizedGraph(Graph core, std::map<VertexId, TailSpec> tails)
    : core_(std::move(core)), tails_(std::move(tails)) {
    for (const auto& [v, spec] : tails_) {
        if (spec.v0 != v) {
            throw Error("tail spec keyed by the wrong vertex");
        }
        validate_tailspec(core_, spec);
    }
    for (VertexId v = 0; v < core_.vertex_count(); ++v) {
        if (is_singular(core_, v) && !tails_.contains(v)) {
            tails_.emplace(v, canonical_tailspec(core_, v));
        }
    }
}

DesingularizedGraph desingularize(const Graph& g, const std::map<VertexId, TailSpec>& specs) {
    return DesingularizedGraph(g, specs);
}

const TailSpec& DesingularizedGraph::tail(VertexId v) const {
    const auto it = tails_.find(v);
    if (it == tails_.end()) {
        throw Error("vertex has no tail");
    }
    return it->second;
}

bool DesingularizedGraph::is_vertex(const FVertex& x) const {
    return x.v < core_.vertex_count() && (x.is_core() || has_tail(x.v));
}

bool DesingularizedGraph::is_edge(const FEdge& e) const {
    switch (e.kind) {
    case FEdge::Kind::Core:
        return core_.is_edge(e.core_edge) && !has_tail(core_.source(e.core_edge));
    case FEdge::Kind::Step:
        return e.index >= 1 && has_tail(e.v0);
    case FEdge::Kind::Exit:
        return has_tail(e.v0) && tail(e.v0).has_edge(e.index);
    }
    return false;
}

FVertex DesingularizedGraph::source(const FEdge& e) const {
    if (!is_edge(e)) {
        throw Error("not an edge of the desingularization");
    }
    if (e.kind == FEdge::Kind::Core) {
        return FVertex::core(core_.source(e.core_edge));
    }
    return FVertex::tail(e.v0, e.index - 1);
}

FVertex DesingularizedGraph::target(const FEdge& e) const {
    if (!is_edge(e)) {
        throw Error("not an edge of the desingularization");
    }
    switch (e.kind) {
    case FEdge::Kind::Core:
        return FVertex::core(core_.target(e.core_edge));
    case FEdge::Kind::Step:
        return FVertex::tail(e.v0, e.index);
    case FEdge::Kind::Exit:
        return FVertex::core(core_.target(tail(e.v0).edge(e.index)));
    }
    return {};
}

std::vector<FEdge> DesingularizedGraph::out_edges(const FVertex& x) const {
    if (!is_vertex(x)) {
        throw Error("not a vertex of the desingularization");
    }
    std::vector<FEdge> out;
    if (x.is_core() && !has_tail(x.v)) {
        for (const BundleId b : core_.out_bundles(x.v)) {
            for (std::uint64_t c = 0; c < core_.bundle(b).mult.count(); ++c) {
                out.push_back(FEdge::core(EdgeRef{b, c}));
            }
        }
        return out;
    }
    out.push_back(FEdge::step(x.v, x.depth + 1));
    if (tail(x.v).has_edge(x.depth + 1)) {
        out.push_back(FEdge::exit(x.v, x.depth + 1));
    }
    return out;
}

std::uint64_t DesingularizedGraph::window() const noexcept {
    std::uint64_t w = 1;
    for (const auto& [v, spec] : tails_) {
        w = std::max(w, spec.window());
    }
    return w;
}

std::string DesingularizedGraph::vertex_name(const FVertex& x) const {
    if (x.is_core()) {
        return core_.name(x.v);
    }
    return core_.name(x.v) + "_" + std::to_string(x.depth);
}

std::string DesingularizedGraph::edge_name(const FEdge& e) const {
    switch (e.kind) {
    case FEdge::Kind::Core: {
        const auto& b = core_.bundle(e.core_edge.bundle);
        std::string s = b.label.empty() ? core_.name(b.source) + "->" + core_.name(b.target) : b.label;
        if (!b.mult.is_omega() && b.mult.count() == 1) {
            return s;
        }
        return s + "#" + std::to_string(e.core_edge.copy);
    }
    case FEdge::Kind::Step:
        return "e" + std::to_string(e.index) + "@" + core_.name(e.v0);
    case FEdge::Kind::Exit:
        return "f" + std::to_string(e.index) + "@" + core_.name(e.v0);
    }
    return "?";
}

// ------------------------------------------------------------------- paths

FPath::FPath(const DesingularizedGraph& d, FVertex start, std::vector<FEdge> edges)
    : start_(start), end_(start), edges_(std::move(edges)) {
    if (!d.is_vertex(start_)) {
        throw Error("path starts outside the desingularization");
    }
    for (const FEdge& e : edges_) {
        if (!d.is_edge(e)) {
            throw Error("path uses a non-edge " + d.edge_name(e));
        }
        if (d.source(e) != end_) {
            throw Error("path edges do not compose at " + d.edge_name(e));
        }
        end_ = d.target(e);
    }
}

std::vector<FVertex> FPath::vertices(const DesingularizedGraph& d) const {
    std::vector<FVertex> out{start_};
    for (const FEdge& e : edges_) {
        out.push_back(d.target(e));
    }
    return out;
}

FPath FPath::then(const DesingularizedGraph& d, const FPath& other) const {
    if (end_ != other.start_) {
        throw Error("paths do not compose");
    }
    std::vector<FEdge> all = edges_;
    all.insert(all.end(), other.edges_.begin(), other.edges_.end());
    return FPath(d, start_, std::move(all));
}

FLasso::FLasso(FPath p, FPath c) : prefix(std::move(p)), cycle(std::move(c)) {
    if (!cycle.is_loop()) {
        throw Error("lasso cycle is not a loop");
    }
    if (prefix.range() != cycle.source()) {
        throw Error("lasso prefix does not end at the cycle");
    }
}

TailAbsorbed::TailAbsorbed(const DesingularizedGraph& d, FPath p, VertexId v, std::uint64_t k)
    : prefix(std::move(p)), v0(v), start_index(k) {
    if (!d.has_tail(v0)) {
        throw Error("vertex has no tail");
    }
    if (prefix.range() != FVertex::tail(v0, k)) {
        throw Error("prefix does not end where the tail ray starts");
    }
}

FPath alpha_path(const DesingularizedGraph& d, VertexId v0, std::uint64_t j) {
    if (!d.has_tail(v0) || !d.tail(v0).has_edge(j)) {
        throw Error("alpha^" + std::to_string(j) + " does not exist");
    }
    std::vector<FEdge> edges;
    edges.reserve(j);
    for (std::uint64_t n = 1; n < j; ++n) {
        edges.push_back(FEdge::step(v0, n));
    }
    edges.push_back(FEdge::exit(v0, j));
    return FPath(d, FVertex::core(v0), std::move(edges));
}

FPath phi(const DesingularizedGraph& d, const Path& p) {
    const Graph& g = d.core();
    std::vector<FEdge> edges;
    for (const EdgeRef& e : p.edges()) {
        const VertexId s = g.source(e);
        if (!d.has_tail(s)) {
            edges.push_back(FEdge::core(e));
            continue;
        }
        const std::uint64_t j = d.tail(s).index_of(e);
        for (std::uint64_t n = 1; n < j; ++n) {
            edges.push_back(FEdge::step(s, n));
        }
        edges.push_back(FEdge::exit(s, j));
    }
    return FPath(d, FVertex::core(p.source()), std::move(edges));
}

Path phi_inv(const DesingularizedGraph& d, const FPath& q) {
    if (!q.source().is_core() || !q.range().is_core()) {
        throw Error("phi_inv needs a path between core vertices");
    }
    std::vector<EdgeRef> edges;
    std::uint64_t steps = 0;
    for (const FEdge& e : q.edges()) {
        switch (e.kind) {
        case FEdge::Kind::Core:
            edges.push_back(e.core_edge);
            break;
        case FEdge::Kind::Step:
            ++steps;
            break;
        case FEdge::Kind::Exit:
            // Composition forces e_1 ... e_{j-1} right before f_j.
            if (steps + 1 != e.index) {
                throw Error("malformed tail excursion");
            }
            edges.push_back(d.tail(e.v0).edge(e.index));
            steps = 0;
            break;
        }
    }
    return Path(d.core(), q.source().v, std::move(edges));
}

FEventualPath phi_infinity(const DesingularizedGraph& d, const EventualPath& lambda) {
    if (const auto* l = std::get_if<Lasso>(&lambda)) {
        return FLasso(phi(d, l->prefix), phi(d, l->cycle));
    }
    const auto& fin = std::get<FinitePathToSingular>(lambda);
    return TailAbsorbed(d, phi(d, fin.path), fin.path.range(), 0);
}

namespace {

FPath slice(const DesingularizedGraph& d, const FPath& p, std::size_t from, std::size_t to) {
    const auto verts = p.vertices(d);
    std::vector<FEdge> edges(p.edges().begin() + static_cast<std::ptrdiff_t>(from),
                             p.edges().begin() + static_cast<std::ptrdiff_t>(to));
    return FPath(d, verts[from], std::move(edges));
}

} // namespace

EventualPath psi_infinity(const DesingularizedGraph& d, const FEventualPath& mu) {
    if (const auto* l = std::get_if<FLasso>(&mu)) {
        if (!l->prefix.source().is_core()) {
            throw Error("psi_infinity needs a core source");
        }
        // Every cycle of F passes through the core; rotate it to start there.
        const auto verts = l->cycle.vertices(d);
        std::size_t i = 0;
        while (i < l->cycle.size() && !verts[i].is_core()) {
            ++i;
        }
        if (i == l->cycle.size()) {
            throw Error("cycle avoids the core");
        }
        const FPath head = slice(d, l->cycle, 0, i);
        const FPath rest = slice(d, l->cycle, i, l->cycle.size());
        const FPath prefix = l->prefix.then(d, head);
        const FPath cycle = rest.then(d, head);
        return Lasso(phi_inv(d, prefix), phi_inv(d, cycle));
    }
    const auto& t = std::get<TailAbsorbed>(mu);
    if (!t.prefix.source().is_core()) {
        throw Error("psi_infinity needs a core source");
    }
    const std::size_t k = t.start_index;
    if (t.prefix.size() < k) {
        throw Error("prefix too short for its tail index");
    }
    const FPath to_core = slice(d, t.prefix, 0, t.prefix.size() - k);
    return FinitePathToSingular(d.core(), phi_inv(d, to_core));
}

// -------------------------------------------------------------- TailSubset

TailSubset TailSubset::all() {
    TailSubset t;
    t.rest_ = true;
    return t;
}

TailSubset TailSubset::at_least(std::uint64_t k) {
    if (k <= 1) {
        return all();
    }
    return from(std::vector<bool>(k - 1, false), true);
}

TailSubset TailSubset::below(std::uint64_t k) {
    return from(std::vector<bool>(k > 0 ? k - 1 : 0, true), false);
}

TailSubset TailSubset::from(std::vector<bool> head, bool rest) {
    TailSubset t;
    t.head_ = std::move(head);
    t.rest_ = rest;
    t.normalize();
    return t;
}

void TailSubset::normalize() {
    while (!head_.empty() && head_.back() == rest_) {
        head_.pop_back();
    }
}

bool TailSubset::contains(std::uint64_t n) const noexcept {
    if (n == 0) {
        return false;
    }
    return n <= head_.size() ? static_cast<bool>(head_[n - 1]) : rest_;
}

std::optional<std::uint64_t> TailSubset::min() const noexcept {
    for (std::size_t i = 0; i < head_.size(); ++i) {
        if (head_[i]) {
            return i + 1;
        }
    }
    if (rest_) {
        return head_.size() + 1;
    }
    return std::nullopt;
}

std::optional<std::uint64_t> TailSubset::threshold() const noexcept {
    if (!rest_ || std::any_of(head_.begin(), head_.end(), [](bool b) { return b; })) {
        return std::nullopt;
    }
    return head_.size() + 1;
}

bool TailSubset::subset_of(const TailSubset& o) const noexcept {
    const std::size_t n = std::max(head_.size(), o.head_.size()) + 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (contains(i) && !o.contains(i)) {
            return false;
        }
    }
    return true;
}

std::string TailSubset::describe() const {
    if (is_empty()) {
        return "none";
    }
    if (is_full()) {
        return "all";
    }
    if (const auto k = threshold()) {
        return ">=" + std::to_string(*k);
    }
    if (!rest_) {
        bool prefix = true;
        for (const bool b : head_) {
            prefix = prefix && b;
        }
        if (prefix) {
            return "<" + std::to_string(head_.size() + 1);
        }
    }
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < head_.size(); ++i) {
        if (head_[i]) {
            s += (first ? "" : ",") + std::to_string(i + 1);
            first = false;
        }
    }
    s += "}";
    if (rest_) {
        s += "+>=" + std::to_string(head_.size() + 1);
    }
    return s;
}

namespace {

template <class Op>
TailSubset combine(const TailSubset& a, const TailSubset& b, Op op) {
    const std::size_t n = std::max(a.head().size(), b.head().size());
    std::vector<bool> head(n);
    for (std::size_t i = 0; i < n; ++i) {
        head[i] = op(a.contains(i + 1), b.contains(i + 1));
    }
    return TailSubset::from(std::move(head), op(a.rest(), b.rest()));
}

} // namespace

TailSubset operator|(const TailSubset& a, const TailSubset& b) {
    return combine(a, b, [](bool x, bool y) { return x || y; });
}

TailSubset operator&(const TailSubset& a, const TailSubset& b) {
    return combine(a, b, [](bool x, bool y) { return x && y; });
}

TailSubset operator~(const TailSubset& a) {
    std::vector<bool> head(a.head().size());
    for (std::size_t i = 0; i < head.size(); ++i) {
        head[i] = !a.head()[i];
    }
    return TailSubset::from(std::move(head), !a.rest());
}

// ------------------------------------------------------------- FVertexSet

bool FVertexSet::contains(const FVertex& x) const {
    if (x.is_core()) {
        return x.v < core.size() && core.test(x.v);
    }
    const auto it = tails.find(x.v);
    return it != tails.end() && it->second.contains(x.depth);
}

bool FVertexSet::subset_of(const FVertexSet& o) const {
    if (!core.is_subset_of(o.core)) {
        return false;
    }
    for (const auto& [v, t] : tails) {
        const auto it = o.tails.find(v);
        if (!t.subset_of(it == o.tails.end() ? TailSubset::none() : it->second)) {
            return false;
        }
    }
    return true;
}

bool FVertexSet::is_empty() const {
    return core.none() && std::all_of(tails.begin(), tails.end(), [](const auto& kv) { return kv.second.is_empty(); });
}

namespace {

template <class Op>
FVertexSet combine_sets(const FVertexSet& a, const FVertexSet& b, Op op) {
    FVertexSet out;
    out.core = op(a.core, b.core);
    std::set<VertexId> keys;
    for (const auto& kv : a.tails) {
        keys.insert(kv.first);
    }
    for (const auto& kv : b.tails) {
        keys.insert(kv.first);
    }
    for (const VertexId v : keys) {
        const auto ia = a.tails.find(v);
        const auto ib = b.tails.find(v);
        out.tails[v] = op(ia == a.tails.end() ? TailSubset::none() : ia->second,
                          ib == b.tails.end() ? TailSubset::none() : ib->second);
    }
    return out;
}

} // namespace

FVertexSet operator|(const FVertexSet& a, const FVertexSet& b) {
    return combine_sets(a, b, [](const auto& x, const auto& y) { return x | y; });
}

FVertexSet operator&(const FVertexSet& a, const FVertexSet& b) {
    return combine_sets(a, b, [](const auto& x, const auto& y) { return x & y; });
}

FVertexSet f_empty_set(const DesingularizedGraph& d) {
    FVertexSet x;
    x.core = d.core().empty_set();
    for (const auto& kv : d.tails()) {
        x.tails[kv.first] = TailSubset::none();
    }
    return x;
}

FVertexSet f_full_set(const DesingularizedGraph& d) {
    FVertexSet x;
    x.core = d.core().full_set();
    for (const auto& kv : d.tails()) {
        x.tails[kv.first] = TailSubset::all();
    }
    return x;
}

FVertexSet f_complement(const DesingularizedGraph& d, const FVertexSet& x) {
    FVertexSet out = f_full_set(d);
    out.core = ~x.core;
    for (auto& [v, t] : out.tails) {
        const auto it = x.tails.find(v);
        t = it == x.tails.end() ? TailSubset::all() : ~it->second;
    }
    return out;
}

std::string describe(const DesingularizedGraph& d, const FVertexSet& x) {
    std::string s = "{";
    bool first = true;
    for (auto v = x.core.find_first(); v != VertexSet::npos; v = x.core.find_next(v)) {
        s += (first ? "" : ",") + d.core().name(static_cast<VertexId>(v));
        first = false;
    }
    s += "}";
    for (const auto& [v, t] : x.tails) {
        if (!t.is_empty()) {
            s += " tail(" + d.core().name(v) + "):" + t.describe();
        }
    }
    return s;
}

std::uint64_t f_check_depth(const DesingularizedGraph& d, const FVertexSet& x, VertexId v0) {
    const TailSpec& spec = d.tail(v0);
    const auto it = x.tails.find(v0);
    const std::uint64_t head = it == x.tails.end() ? 0 : it->second.head().size();
    return std::max(head, spec.preamble_size()) + spec.period_size() + 1;
}

namespace {

// Calls f on every F-vertex whose local neighbourhood can matter for x:
// all core vertices and tail depths 1..f_check_depth.
template <class F>
bool all_window_vertices(const DesingularizedGraph& d, const FVertexSet& x, F f) {
    for (VertexId v = 0; v < d.core().vertex_count(); ++v) {
        if (!f(FVertex::core(v))) {
            return false;
        }
    }
    for (const auto& kv : d.tails()) {
        const std::uint64_t bound = f_check_depth(d, x, kv.first);
        for (std::uint64_t n = 1; n <= bound; ++n) {
            if (!f(FVertex::tail(kv.first, n))) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

// Past f_check_depth both the membership of (v0,n), (v0,n+1) and the target
// of f_{n+1} repeat with the period length, so the window is conclusive.
bool f_is_hereditary(const DesingularizedGraph& d, const FVertexSet& x) {
    return all_window_vertices(d, x, [&](const FVertex& u) {
        if (!x.contains(u)) {
            return true;
        }
        for (const FEdge& e : d.out_edges(u)) {
            if (!x.contains(d.target(e))) {
                return false;
            }
        }
        return true;
    });
}

// F has no singular vertices, so every vertex feeding only into x must be in x.
bool f_is_saturated(const DesingularizedGraph& d, const FVertexSet& x) {
    return all_window_vertices(d, x, [&](const FVertex& u) {
        if (x.contains(u)) {
            return true;
        }
        for (const FEdge& e : d.out_edges(u)) {
            if (!x.contains(d.target(e))) {
                return true;
            }
        }
        return false;
    });
}

// Among core vertices F-reachability is E-reachability: a singular v0 reaches
// every r(g_j) through its tail. A core vertex on a tail-bearing vertex
// reaches that whole tail; (v0,n) reaches depths >= n and r(g_j) for j > n.
FVertexSet f_reach(const DesingularizedGraph& d, const FVertex& x) {
    if (!d.is_vertex(x)) {
        throw Error("not a vertex of the desingularization");
    }
    const Graph& g = d.core();
    FVertexSet out = f_empty_set(d);
    if (x.is_core()) {
        out.core = g.reach_set(x.v);
    } else {
        const TailSpec& spec = d.tail(x.v);
        for (std::uint64_t j = x.depth + 1; j <= spec.preamble_size(); ++j) {
            out.core |= g.reach_set(g.target(spec.preamble[j - 1]));
        }
        for (const BundleId b : spec.period) {
            out.core |= g.reach_set(g.bundle(b).target);
        }
        out.tails[x.v] = TailSubset::at_least(x.depth);
    }
    for (auto& [v, t] : out.tails) {
        if (out.core.test(v)) {
            t = TailSubset::all();
        }
    }
    return out;
}

FVertexSet f_coreach(const DesingularizedGraph& d, const FVertexSet& x) {
    const Graph& g = d.core();
    VertexSet hits = x.core;
    for (const auto& [v, t] : x.tails) {
        if (!t.is_empty()) {
            hits.set(v);
        }
    }
    const auto core_reaches = [&](VertexId u) { return g.reach_set(u).intersects(hits); };

    FVertexSet out = f_empty_set(d);
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        out.core[u] = core_reaches(u);
    }
    for (auto& [v0, t] : out.tails) {
        const TailSpec& spec = d.tail(v0);
        const auto it = x.tails.find(v0);
        const TailSubset own = it == x.tails.end() ? TailSubset::none() : it->second;
        bool deep = own.rest();
        for (const BundleId b : spec.period) {
            deep = deep || core_reaches(g.bundle(b).target);
        }
        if (deep) {
            t = TailSubset::all();
            continue;
        }
        // The set of depths reaching x is a down-set; find its size.
        std::uint64_t last = 0;
        const std::uint64_t bound = std::max<std::uint64_t>(own.head().size(), spec.preamble_size());
        for (std::uint64_t n = 1; n <= bound; ++n) {
            bool r = false;
            for (std::uint64_t m = n; m <= own.head().size() && !r; ++m) {
                r = own.contains(m);
            }
            for (std::uint64_t j = n + 1; j <= spec.preamble_size() && !r; ++j) {
                r = core_reaches(g.target(spec.preamble[j - 1]));
            }
            if (r) {
                last = n;
            }
        }
        t = TailSubset::below(last + 1);
    }
    return out;
}

FVertexSet f_vertices_on(const DesingularizedGraph& d, const FEventualPath& mu) {
    FVertexSet out = f_empty_set(d);
    const auto add = [&](const FPath& p) {
        for (const FVertex& u : p.vertices(d)) {
            if (u.is_core()) {
                out.core.set(u.v);
            } else {
                std::vector<bool> single(u.depth, false);
                single.back() = true;
                out.tails[u.v] = out.tails[u.v] | TailSubset::from(std::move(single), false);
            }
        }
    };
    if (const auto* l = std::get_if<FLasso>(&mu)) {
        add(l->prefix);
        add(l->cycle);
    } else {
        const auto& t = std::get<TailAbsorbed>(mu);
        add(t.prefix);
        out.tails[t.v0] = out.tails[t.v0] | TailSubset::at_least(std::max<std::uint64_t>(t.start_index, 1));
    }
    return out;
}

bool f_connects_to_eventual(const DesingularizedGraph& d, const FVertex& x, const FEventualPath& mu) {
    return !(f_reach(d, x) & f_vertices_on(d, mu)).is_empty();
}

// ---------------------------------------------------------------- truncate

std::optional<VertexId> TruncatedGraph::find(const FVertex& x) const {
    const auto it = std::find(origin.begin(), origin.end(), x);
    if (it == origin.end()) {
        return std::nullopt;
    }
    return static_cast<VertexId>(it - origin.begin());
}

namespace {

// Vertex list of a window: core vertices, then each tail's depths 1..depth.
// Tail names are "<v0>_<n>", primed until unique.
struct Layout {
    std::vector<std::string> names;
    std::vector<FVertex> origin;
    std::map<FVertex, VertexId> index;
};

Layout make_layout(const Graph& g, const std::vector<VertexId>& tails, std::uint64_t depth) {
    Layout l;
    std::set<std::string> used(g.names().begin(), g.names().end());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        l.index[FVertex::core(v)] = v;
        l.names.push_back(g.name(v));
        l.origin.push_back(FVertex::core(v));
    }
    for (const VertexId v0 : tails) {
        for (std::uint64_t n = 1; n <= depth; ++n) {
            std::string name = g.name(v0) + "_" + std::to_string(n);
            while (used.contains(name)) {
                name += "'";
            }
            used.insert(name);
            l.index[FVertex::tail(v0, n)] = static_cast<VertexId>(l.names.size());
            l.names.push_back(std::move(name));
            l.origin.push_back(FVertex::tail(v0, n));
        }
    }
    return l;
}

void add_core_bundles(const Graph& g, const std::vector<VertexId>& tails, std::vector<BundleSpec>& specs,
                      std::vector<FEdge>& origin) {
    for (const EdgeBundle& b : g.bundles()) {
        if (std::find(tails.begin(), tails.end(), b.source) != tails.end()) {
            continue;
        }
        specs.push_back(BundleSpec{b.source, b.target, b.mult, b.label});
        origin.push_back(FEdge::core(EdgeRef{b.id, 0}));
    }
}

TruncatedGraph finish(Layout l, std::vector<BundleSpec> specs, std::vector<FEdge> origin,
                      const std::vector<VertexId>& tails, std::uint64_t depth) {
    TruncatedGraph t{Graph(std::move(l.names), std::move(specs)), std::move(l.origin), std::move(origin), {}, depth};
    t.boundary = t.graph.empty_set();
    for (const VertexId v0 : tails) {
        t.boundary.set(l.index.at(FVertex::tail(v0, depth)));
    }
    return t;
}

} // namespace

TruncatedGraph truncate(const DesingularizedGraph& d, std::uint64_t depth) {
    if (depth == 0) {
        throw Error("truncation depth must be positive");
    }
    const Graph& g = d.core();
    std::vector<VertexId> tails;
    for (const auto& kv : d.tails()) {
        tails.push_back(kv.first);
    }
    Layout l = make_layout(g, tails, depth);
    std::vector<BundleSpec> specs;
    std::vector<FEdge> origin;
    add_core_bundles(g, tails, specs, origin);
    for (const VertexId v0 : tails) {
        const TailSpec& spec = d.tail(v0);
        for (std::uint64_t n = 0; n < depth; ++n) {
            const VertexId from = l.index.at(FVertex::tail(v0, n));
            specs.push_back(BundleSpec{from, l.index.at(FVertex::tail(v0, n + 1)), Multiplicity::finite(1), ""});
            origin.push_back(FEdge::step(v0, n + 1));
            if (spec.has_edge(n + 1)) {
                specs.push_back(
                    BundleSpec{from, g.target(spec.edge(n + 1)), Multiplicity::finite(1), ""});
                origin.push_back(FEdge::exit(v0, n + 1));
            }
        }
    }
    return finish(std::move(l), std::move(specs), std::move(origin), tails, depth);
}

// ------------------------------------------------------- F-level decisions

namespace {

std::vector<FVertex> window_vertices(const DesingularizedGraph& d, bool preamble_only) {
    std::vector<FVertex> out;
    for (VertexId v = 0; v < d.core().vertex_count(); ++v) {
        out.push_back(FVertex::core(v));
    }
    for (const auto& [v0, spec] : d.tails()) {
        const std::uint64_t bound = preamble_only ? spec.preamble_size() : spec.window();
        for (std::uint64_t n = 1; n <= bound; ++n) {
            out.push_back(FVertex::tail(v0, n));
        }
    }
    return out;
}

FPath to_fpath(const DesingularizedGraph& d, const TruncatedGraph& t, const Path& p) {
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

} // namespace

// An exitless loop only visits vertices with a single outgoing edge, so it is
// found by following unique successors from any of its vertices. Every cycle
// of F meets the core, so starting from window vertices is enough.
FDecision condition_L_F(const DesingularizedGraph& d) {
    const auto starts = window_vertices(d, false);
    for (const FVertex& start : starts) {
        std::vector<FEdge> walk;
        FVertex u = start;
        for (std::size_t step = 0; step < starts.size(); ++step) {
            const auto out = d.out_edges(u);
            if (out.size() != 1) {
                break;
            }
            walk.push_back(out.front());
            u = d.target(out.front());
            if (u == start) {
                return {false, FWitness{"loop at " + d.vertex_name(start) + " has no exit", start,
                                        FPath(d, start, walk), std::nullopt}};
            }
        }
    }
    return {true, std::nullopt};
}

// A simple loop through some f_j with j > P can be pushed L steps further down
// the tail, so such loops come in infinite families; the first two members
// use depths <= P + 2L and are visible in the window truncation. Loops using
// only f_j with j <= P live inside depth P. Hence simple-loop counts (capped
// at 2) of core vertices and tail depths <= P agree with the window
// truncation. Deeper tail vertices only base loops through period exits, so
// their counts are 0 or infinite and cannot violate (K).
FDecision condition_K_F(const DesingularizedGraph& d) {
    const TruncatedGraph t = truncate(d, d.window());
    for (const FVertex& x : window_vertices(d, true)) {
        const VertexId idx = *t.find(x);
        const LoopCount loops = simple_loops_based_at(t.graph, idx, 2);
        if (loops.count == 1) {
            return {false, FWitness{d.vertex_name(x) + " is the base of exactly one simple loop", x,
                                    to_fpath(d, t, loops.witnesses.front()), std::nullopt}};
        }
    }
    return {true, std::nullopt};
}

// An infinite path of F either visits some vertex infinitely often (which then
// lies on a cycle, and every cycle meets the core) or eventually runs down a
// single tail. So F is cofinal iff every vertex reaches every core vertex on
// an F-cycle and some depth of every tail. Reach sets shrink with depth and
// are constant past the preamble, so starting depths <= P + 1 suffice.
FDecision cofinal_F(const DesingularizedGraph& d) {
    const Graph& g = d.core();
    std::vector<VertexId> cyclic;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        for (const FEdge& e : d.out_edges(FVertex::core(u))) {
            if (f_reach(d, d.target(e)).contains(FVertex::core(u))) {
                cyclic.push_back(u);
                break;
            }
        }
    }
    std::vector<FVertex> starts;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        starts.push_back(FVertex::core(v));
    }
    for (const auto& [v0, spec] : d.tails()) {
        for (std::uint64_t n = 1; n <= spec.preamble_size() + 1; ++n) {
            starts.push_back(FVertex::tail(v0, n));
        }
    }
    for (const FVertex& s : starts) {
        const FVertexSet r = f_reach(d, s);
        for (const VertexId u : cyclic) {
            if (!r.core.test(u)) {
                return {false, FWitness{d.vertex_name(s) + " does not reach the cycle through " + g.name(u), s,
                                        std::nullopt, FVertex::core(u)}};
            }
        }
        for (const auto& [v0, t] : r.tails) {
            if (t.is_empty()) {
                return {false, FWitness{d.vertex_name(s) + " does not reach the tail at " + g.name(v0), s,
                                        std::nullopt, FVertex::tail(v0, 1)}};
            }
        }
    }
    return {true, std::nullopt};
}

// ------------------------------------------------------------- partitions

PartitionedDesingularization::PartitionedDesingularization(Graph core, std::map<VertexId, PartitionSpec> parts)
    : core_(std::move(core)), parts_(std::move(parts)) {
    for (const auto& [v0, p] : parts_) {
        core_.check_vertex(v0);
        const std::string at = "partition at " + core_.name(v0) + ": ";
        if (p.v0 != v0) {
            throw Error(at + "keyed by the wrong vertex");
        }
        if (!is_singular(core_, v0)) {
            throw Error(at + "vertex is not singular");
        }
        std::set<EdgeRef> seen;
        std::uint64_t finite_seen = 0;
        for (const auto& block : p.blocks) {
            for (const EdgeRef& e : block) {
                if (!core_.is_edge(e) || core_.source(e) != v0) {
                    throw Error(at + "block names an edge that does not leave the vertex");
                }
                if (!seen.insert(e).second) {
                    throw Error(at + "blocks are not disjoint");
                }
                finite_seen += core_.bundle(e.bundle).mult.is_omega() ? 0 : 1;
            }
        }
        std::uint64_t finite = 0;
        bool omega = false;
        for (const BundleId b : core_.out_bundles(v0)) {
            const auto& m = core_.bundle(b).mult;
            omega = omega || m.is_omega();
            finite += m.is_omega() ? 0 : m.count();
        }
        if (finite_seen != finite) {
            throw Error(at + "explicit blocks must cover every finite edge");
        }
        if (omega && p.rest_block_size == 0) {
            throw Error(at + "rest block size must be positive");
        }
    }
    for (VertexId v = 0; v < core_.vertex_count(); ++v) {
        if (!is_singular(core_, v) || parts_.contains(v)) {
            continue;
        }
        PartitionSpec p;
        p.v0 = v;
        for (const EdgeRef& e : canonical_tailspec(core_, v).preamble) {
            p.blocks.push_back({e});
        }
        parts_.emplace(v, std::move(p));
    }
}

const PartitionSpec& PartitionedDesingularization::partition(VertexId v0) const {
    const auto it = parts_.find(v0);
    if (it == parts_.end()) {
        throw Error("vertex has no tail");
    }
    return it->second;
}

std::vector<EdgeRef> PartitionedDesingularization::block(VertexId v0, std::uint64_t i) const {
    const PartitionSpec& p = partition(v0);
    if (i < p.blocks.size()) {
        return p.blocks[i];
    }
    std::vector<BundleId> omega;
    for (const BundleId b : core_.out_bundles(v0)) {
        if (core_.bundle(b).mult.is_omega()) {
            omega.push_back(b);
        }
    }
    if (omega.empty()) {
        return {};
    }
    std::set<EdgeRef> used;
    for (const auto& blk : p.blocks) {
        used.insert(blk.begin(), blk.end());
    }
    const std::uint64_t first = (i - p.blocks.size()) * p.rest_block_size;
    std::vector<EdgeRef> out;
    std::uint64_t t = 0;
    for (std::uint64_t k = 0; out.size() < p.rest_block_size; ++k) {
        const EdgeRef e{omega[k % omega.size()], k / omega.size()};
        if (used.contains(e)) {
            continue;
        }
        if (t >= first) {
            out.push_back(e);
        }
        ++t;
    }
    return out;
}

TruncatedGraph PartitionedDesingularization::truncate(std::uint64_t depth) const {
    if (depth == 0) {
        throw Error("truncation depth must be positive");
    }
    std::vector<VertexId> tails;
    for (const auto& kv : parts_) {
        tails.push_back(kv.first);
    }
    Layout l = make_layout(core_, tails, depth);
    std::vector<BundleSpec> specs;
    std::vector<FEdge> origin;
    add_core_bundles(core_, tails, specs, origin);
    for (const VertexId v0 : tails) {
        for (std::uint64_t n = 0; n < depth; ++n) {
            const VertexId from = l.index.at(FVertex::tail(v0, n));
            specs.push_back(BundleSpec{from, l.index.at(FVertex::tail(v0, n + 1)), Multiplicity::finite(1), ""});
            origin.push_back(FEdge::step(v0, n + 1));
            for (const EdgeRef& e : block(v0, n)) {
                specs.push_back(BundleSpec{from, core_.target(e), Multiplicity::finite(1), ""});
                // Index records the emitting depth plus one, as for f_j.
                origin.push_back(FEdge::exit(v0, n + 1));
            }
        }
    }
    return finish(std::move(l), std::move(specs), std::move(origin), tails, depth);
}

PartitionedDesingularization desingularize_partitioned(const Graph& g,
                                                       const std::map<VertexId, PartitionSpec>& parts) {
    return PartitionedDesingularization(g, parts);
}

} // namespace ckgraph
