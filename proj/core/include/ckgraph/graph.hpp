// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Finite directed graphs whose edges come in bundles of parallel copies. A
// bundle may carry countably many copies (multiplicity omega), which is how
// infinite-emitters are represented with a finite description.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace ckgraph {

using VertexId = std::uint32_t;
using BundleId = std::uint32_t;

// Bitset over the ordered vertex list of a graph.
using VertexSet = boost::dynamic_bitset<>;

class Multiplicity {
  public:
    // Throws ckgraph::Error for n == 0.
    static Multiplicity finite(std::uint64_t n);
    static constexpr Multiplicity omega() noexcept { return Multiplicity{}; }

    [[nodiscard]] constexpr bool is_omega() const noexcept { return value_ == 0; }
    // Number of copies; only meaningful when !is_omega().
    [[nodiscard]] constexpr std::uint64_t count() const noexcept { return value_; }
    // True if `copy` indexes an existing copy of the bundle.
    [[nodiscard]] constexpr bool admits(std::uint64_t copy) const noexcept {
        return is_omega() || copy < value_;
    }

    friend constexpr bool operator==(Multiplicity, Multiplicity) = default;

  private:
    constexpr Multiplicity() = default;
    explicit constexpr Multiplicity(std::uint64_t v) : value_(v) {}

    std::uint64_t value_ = 0; // 0 encodes omega
};

struct EdgeBundle {
    BundleId id = 0;
    VertexId source = 0;
    VertexId target = 0;
    Multiplicity mult = Multiplicity::finite(1);
    std::string label; // optional, used by DOT export

    friend bool operator==(const EdgeBundle&, const EdgeBundle&) = default;
};

// One individual edge: copy `copy` of bundle `bundle`.
struct EdgeRef {
    BundleId bundle = 0;
    std::uint64_t copy = 0;

    friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct BundleSpec {
    VertexId source = 0;
    VertexId target = 0;
    Multiplicity mult = Multiplicity::finite(1);
    std::string label;
};

class Graph {
  public:
    // Bundle ids are assigned in order. Throws ckgraph::Error on an empty or
    // duplicate vertex name or an endpoint out of range.
    Graph(std::vector<std::string> vertex_names, std::vector<BundleSpec> bundles);

    [[nodiscard]] std::size_t vertex_count() const noexcept { return names_.size(); }
    [[nodiscard]] std::size_t bundle_count() const noexcept { return bundles_.size(); }
    [[nodiscard]] const std::string& name(VertexId v) const;
    [[nodiscard]] std::span<const std::string> names() const noexcept { return names_; }
    [[nodiscard]] std::optional<VertexId> find(std::string_view name) const;
    // Throws on an unknown name.
    [[nodiscard]] VertexId vertex(std::string_view name) const;

    [[nodiscard]] std::span<const EdgeBundle> bundles() const noexcept { return bundles_; }
    [[nodiscard]] const EdgeBundle& bundle(BundleId b) const;
    [[nodiscard]] std::span<const BundleId> out_bundles(VertexId v) const;

    [[nodiscard]] bool is_edge(const EdgeRef& e) const noexcept;
    [[nodiscard]] VertexId source(const EdgeRef& e) const { return bundle(e.bundle).source; }
    [[nodiscard]] VertexId target(const EdgeRef& e) const { return bundle(e.bundle).target; }

    // Total number of edges leaving v; nullopt when infinite.
    [[nodiscard]] std::optional<std::uint64_t> out_degree(VertexId v) const;

    // Vertices reachable from v by a path of length >= 0.
    [[nodiscard]] const VertexSet& reach_set(VertexId v) const;
    [[nodiscard]] VertexSet empty_set() const { return VertexSet(vertex_count()); }
    [[nodiscard]] VertexSet full_set() const { return ~empty_set(); }

    // Throws ckgraph::Error if v is not a vertex.
    void check_vertex(VertexId v) const;

    // Same names and bundles, in the same order.
    friend bool operator==(const Graph& a, const Graph& b) { return a.names_ == b.names_ && a.bundles_ == b.bundles_; }

  private:
    std::vector<std::string> names_;
    std::vector<EdgeBundle> bundles_;
    std::vector<std::vector<BundleId>> out_;
    std::vector<VertexSet> reach_;
};

// A finite path. An empty path is anchored at a vertex.
class Path {
  public:
    // Throws ckgraph::Error unless the edges exist and compose starting at `start`.
    Path(const Graph& g, VertexId start, std::vector<EdgeRef> edges);
    // Nonempty path; the start is the source of the first edge.
    Path(const Graph& g, std::vector<EdgeRef> edges);

    static Path at(const Graph& g, VertexId v) { return Path(g, v, {}); }

    [[nodiscard]] VertexId source() const noexcept { return start_; }
    [[nodiscard]] VertexId range() const noexcept { return end_; }
    [[nodiscard]] const std::vector<EdgeRef>& edges() const noexcept { return edges_; }
    [[nodiscard]] std::size_t size() const noexcept { return edges_.size(); }
    [[nodiscard]] bool empty() const noexcept { return edges_.empty(); }
    [[nodiscard]] bool is_loop() const noexcept { return !empty() && start_ == end_; }

    // All vertices visited, in order: size() + 1 entries.
    [[nodiscard]] std::vector<VertexId> vertices(const Graph& g) const;
    // Sources of the edges, in order (the vertices s(alpha_i)).
    [[nodiscard]] std::vector<VertexId> sources(const Graph& g) const;

    // Throws if range() != other.source().
    [[nodiscard]] Path then(const Graph& g, const Path& other) const;

    friend bool operator==(const Path&, const Path&) = default;

  private:
    VertexId start_ = 0;
    VertexId end_ = 0;
    std::vector<EdgeRef> edges_;
};

// Eventually periodic infinite path: prefix followed by cycle repeated forever.
struct Lasso {
    Path prefix;
    Path cycle;

    // Throws unless cycle is a loop and prefix ends where the cycle starts.
    Lasso(Path prefix, Path cycle);

    friend bool operator==(const Lasso&, const Lasso&) = default;
};

// Finite path ending at a sink or infinite-emitter.
struct FinitePathToSingular {
    Path path;

    // Throws unless r(path) is singular in g.
    FinitePathToSingular(const Graph& g, Path path);

    friend bool operator==(const FinitePathToSingular&, const FinitePathToSingular&) = default;
};

using EventualPath = std::variant<Lasso, FinitePathToSingular>;

// Vertices lying on an eventual path (prefix and cycle vertices for a lasso,
// every vertex including the terminal one for a finite path).
VertexSet vertices_on(const Graph& g, const EventualPath& lambda);
VertexId source_of(const EventualPath& lambda);

bool is_sink(const Graph& g, VertexId v);
bool is_infinite_emitter(const Graph& g, VertexId v);
bool is_singular(const Graph& g, VertexId v);
VertexSet singular_vertices(const Graph& g);
bool is_row_finite(const Graph& g);

// Reflexive, transitive reachability.
bool reaches(const Graph& g, VertexId v, VertexId w);
// True if v reaches some vertex of `targets`.
bool reaches_any(const Graph& g, VertexId v, const VertexSet& targets);
// v >= lambda.
bool connects_to_eventual(const Graph& g, VertexId v, const EventualPath& lambda);

struct LoopCount {
    std::uint64_t count = 0; // saturates at the requested cap
    std::vector<Path> witnesses; // min(count, cap) distinct simple loops
};

// Simple loops based at v (v is not revisited before the end). Parallel copies
// count separately. Throws if cap < 2.
LoopCount simple_loops_based_at(const Graph& g, VertexId v, std::uint64_t cap = 2);

// Throws unless `loop` is a loop.
bool loop_has_exit(const Graph& g, const Path& loop);

// True if v lies on some loop.
bool on_cycle(const Graph& g, VertexId v);
// Some loop based at v made of copy-0 edges, if v lies on a cycle.
std::optional<Path> cycle_through(const Graph& g, VertexId v);
// One representative vertex per strongly connected component containing a
// loop, in increasing vertex order.
std::vector<VertexId> cyclic_component_roots(const Graph& g);
// Shortest path (copy-0 edges) from v to w, if w is reachable.
std::optional<Path> shortest_path(const Graph& g, VertexId v, VertexId w);

} // namespace ckgraph
