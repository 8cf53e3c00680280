// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Desingularization: every singular vertex v0 of a finite graph E gets an
// infinite tail v0 = (v0,0) -> (v0,1) -> (v0,2) -> ... and the edges
// g_1, g_2, ... leaving v0 are redistributed along it, g_j becoming
// f_j : (v0,j-1) -> r(g_j). The resulting infinite graph F is finitely
// presented by E and one TailSpec per singular vertex.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ckgraph/graph.hpp"

namespace ckgraph {

// Enumeration g_1, g_2, ... of the edges leaving v0. Finite copies come first
// (in preamble order), then the omega bundles of `period` are visited round
// robin: g_{P+1+k} is copy k / L of bundle period[k % L].
struct TailSpec {
    VertexId v0 = 0;
    std::vector<EdgeRef> preamble;
    std::vector<BundleId> period;

    [[nodiscard]] std::uint64_t preamble_size() const noexcept { return preamble.size(); }
    [[nodiscard]] std::uint64_t period_size() const noexcept { return period.size(); }
    [[nodiscard]] bool is_sink_tail() const noexcept { return preamble.empty() && period.empty(); }

    // True if g_j exists (j >= 1).
    [[nodiscard]] bool has_edge(std::uint64_t j) const noexcept;
    // g_j. Throws if it does not exist.
    [[nodiscard]] EdgeRef edge(std::uint64_t j) const;
    // The j with g_j == e. Throws if e is not enumerated.
    [[nodiscard]] std::uint64_t index_of(const EdgeRef& e) const;
    // Tail depths at least this large behave periodically.
    [[nodiscard]] std::uint64_t window() const noexcept { return preamble_size() + 2 * period_size() + 1; }

    friend bool operator==(const TailSpec&, const TailSpec&) = default;
};

// Throws unless v0 is singular.
TailSpec canonical_tailspec(const Graph& g, VertexId v0);
// Throws unless spec enumerates s^{-1}(spec.v0) bijectively.
void validate_tailspec(const Graph& g, const TailSpec& spec);

// Vertex of F: the core vertex v when depth == 0, otherwise Tail(v, depth).
struct FVertex {
    VertexId v = 0;
    std::uint64_t depth = 0;

    static constexpr FVertex core(VertexId v) noexcept { return {v, 0}; }
    static constexpr FVertex tail(VertexId v0, std::uint64_t n) noexcept { return {v0, n}; }
    [[nodiscard]] constexpr bool is_core() const noexcept { return depth == 0; }

    friend auto operator<=>(const FVertex&, const FVertex&) = default;
};

// Edge of F: an edge of E at a regular source, e_n^{v0} or f_j^{v0}.
struct FEdge {
    enum class Kind : std::uint8_t { Core, Step, Exit };

    Kind kind = Kind::Core;
    EdgeRef core_edge{}; // Kind::Core
    VertexId v0 = 0;     // Kind::Step and Kind::Exit
    std::uint64_t index = 0;

    static FEdge core(EdgeRef e) noexcept { return {Kind::Core, e, 0, 0}; }
    static FEdge step(VertexId v0, std::uint64_t n) noexcept { return {Kind::Step, {}, v0, n}; } // e_n
    static FEdge exit(VertexId v0, std::uint64_t j) noexcept { return {Kind::Exit, {}, v0, j}; } // f_j

    friend auto operator<=>(const FEdge&, const FEdge&) = default;
};

class DesingularizedGraph {
  public:
    // Singular vertices missing from `tails` get the canonical spec. Throws on
    // a spec for a regular vertex or an invalid spec.
    DesingularizedGraph(Graph core, std::map<VertexId, TailSpec> tails);

    [[nodiscard]] const Graph& core() const noexcept { return core_; }
    [[nodiscard]] const std::map<VertexId, TailSpec>& tails() const noexcept { return tails_; }
    [[nodiscard]] bool has_tail(VertexId v) const { return tails_.contains(v); }
    // Throws if v has no tail.
    [[nodiscard]] const TailSpec& tail(VertexId v) const;

    [[nodiscard]] bool is_vertex(const FVertex& x) const;
    [[nodiscard]] bool is_edge(const FEdge& e) const;
    [[nodiscard]] FVertex source(const FEdge& e) const;
    [[nodiscard]] FVertex target(const FEdge& e) const;
    // F is row-finite, so this is always a finite list.
    [[nodiscard]] std::vector<FEdge> out_edges(const FVertex& x) const;

    // Maximum TailSpec::window() over all tails (at least 1).
    [[nodiscard]] std::uint64_t window() const noexcept;

    [[nodiscard]] std::string vertex_name(const FVertex& x) const;
    [[nodiscard]] std::string edge_name(const FEdge& e) const;

  private:
    Graph core_;
    std::map<VertexId, TailSpec> tails_;
};

DesingularizedGraph desingularize(const Graph& g, const std::map<VertexId, TailSpec>& specs = {});

// Finite path in F.
class FPath {
  public:
    FPath(const DesingularizedGraph& d, FVertex start, std::vector<FEdge> edges);

    static FPath at(const DesingularizedGraph& d, FVertex x) { return FPath(d, x, std::vector<FEdge>{}); }

    [[nodiscard]] FVertex source() const noexcept { return start_; }
    [[nodiscard]] FVertex range() const noexcept { return end_; }
    [[nodiscard]] const std::vector<FEdge>& edges() const noexcept { return edges_; }
    [[nodiscard]] std::size_t size() const noexcept { return edges_.size(); }
    [[nodiscard]] bool empty() const noexcept { return edges_.empty(); }
    [[nodiscard]] bool is_loop() const noexcept { return !empty() && start_ == end_; }
    [[nodiscard]] std::vector<FVertex> vertices(const DesingularizedGraph& d) const;
    [[nodiscard]] FPath then(const DesingularizedGraph& d, const FPath& other) const;

    friend bool operator==(const FPath&, const FPath&) = default;

  private:
    FVertex start_;
    FVertex end_;
    std::vector<FEdge> edges_;
};

struct FLasso {
    FPath prefix;
    FPath cycle;

    // Throws unless cycle is a loop starting where prefix ends.
    FLasso(FPath prefix, FPath cycle);

    friend bool operator==(const FLasso&, const FLasso&) = default;
};

// prefix followed by e_{k+1} e_{k+2} ... down the tail of v0, where prefix
// ends at (v0, k).
struct TailAbsorbed {
    FPath prefix;
    VertexId v0 = 0;
    std::uint64_t start_index = 0;

    TailAbsorbed(const DesingularizedGraph& d, FPath prefix, VertexId v0, std::uint64_t start_index);

    friend bool operator==(const TailAbsorbed&, const TailAbsorbed&) = default;
};

using FEventualPath = std::variant<FLasso, TailAbsorbed>;

// alpha^j = e_1 ... e_{j-1} f_j from v0 to r(g_j).
FPath alpha_path(const DesingularizedGraph& d, VertexId v0, std::uint64_t j);

FPath phi(const DesingularizedGraph& d, const Path& p);
// Throws unless both endpoints of q are core vertices.
Path phi_inv(const DesingularizedGraph& d, const FPath& q);
FEventualPath phi_infinity(const DesingularizedGraph& d, const EventualPath& lambda);
// Throws if the source is a tail vertex.
EventualPath psi_infinity(const DesingularizedGraph& d, const FEventualPath& mu);

// Subset of the depths {1, 2, ...} of one tail: explicit membership up to
// head().size(), constant rest() afterwards. Kept normalized so equal sets
// compare equal.
class TailSubset {
  public:
    TailSubset() = default;

    static TailSubset none() { return {}; }
    static TailSubset all();
    // {n : n >= k}; k <= 1 gives all().
    static TailSubset at_least(std::uint64_t k);
    // {n : 1 <= n < k}.
    static TailSubset below(std::uint64_t k);
    static TailSubset from(std::vector<bool> head, bool rest);

    [[nodiscard]] bool contains(std::uint64_t n) const noexcept;
    [[nodiscard]] const std::vector<bool>& head() const noexcept { return head_; }
    [[nodiscard]] bool rest() const noexcept { return rest_; }
    [[nodiscard]] bool is_empty() const noexcept { return head_.empty() && !rest_; }
    [[nodiscard]] bool is_full() const noexcept { return head_.empty() && rest_; }
    [[nodiscard]] std::optional<std::uint64_t> min() const noexcept;
    // The k with *this == at_least(k), if any.
    [[nodiscard]] std::optional<std::uint64_t> threshold() const noexcept;
    [[nodiscard]] bool subset_of(const TailSubset& o) const noexcept;
    [[nodiscard]] std::string describe() const;

    friend TailSubset operator|(const TailSubset& a, const TailSubset& b);
    friend TailSubset operator&(const TailSubset& a, const TailSubset& b);
    friend TailSubset operator~(const TailSubset& a);
    friend bool operator==(const TailSubset&, const TailSubset&) = default;

  private:
    void normalize();

    std::vector<bool> head_;
    bool rest_ = false;
};

// Subset of F^0: a core vertex set plus one TailSubset per tail.
struct FVertexSet {
    VertexSet core;
    std::map<VertexId, TailSubset> tails;

    [[nodiscard]] bool contains(const FVertex& x) const;
    [[nodiscard]] bool subset_of(const FVertexSet& o) const;
    [[nodiscard]] bool is_empty() const;

    friend FVertexSet operator|(const FVertexSet& a, const FVertexSet& b);
    friend FVertexSet operator&(const FVertexSet& a, const FVertexSet& b);
    friend bool operator==(const FVertexSet&, const FVertexSet&) = default;
};

FVertexSet f_empty_set(const DesingularizedGraph& d);
FVertexSet f_full_set(const DesingularizedGraph& d);
FVertexSet f_complement(const DesingularizedGraph& d, const FVertexSet& x);
std::string describe(const DesingularizedGraph& d, const FVertexSet& x);

// Depth bound past which membership in x and the tail structure are both
// periodic, so checks over depths 1..bound are conclusive.
std::uint64_t f_check_depth(const DesingularizedGraph& d, const FVertexSet& x, VertexId v0);

bool f_is_hereditary(const DesingularizedGraph& d, const FVertexSet& x);
bool f_is_saturated(const DesingularizedGraph& d, const FVertexSet& x);

// All F-vertices reachable from x (reflexive).
FVertexSet f_reach(const DesingularizedGraph& d, const FVertex& x);
// All F-vertices that reach some vertex of x (reflexive).
FVertexSet f_coreach(const DesingularizedGraph& d, const FVertexSet& x);
bool f_connects_to_eventual(const DesingularizedGraph& d, const FVertex& x, const FEventualPath& mu);
// Vertices on mu.
FVertexSet f_vertices_on(const DesingularizedGraph& d, const FEventualPath& mu);

// Finite window of F: core vertices and tail depths 1..depth. Tail(v0,depth)
// emits nothing and is flagged in `boundary`.
struct TruncatedGraph {
    Graph graph;
    std::vector<FVertex> origin;     // per truncated vertex
    std::vector<FEdge> edge_origin;  // per bundle; core bundles carry copy 0
    VertexSet boundary;
    std::uint64_t depth = 0;

    // Vertex of the truncation, if x is inside the window.
    [[nodiscard]] std::optional<VertexId> find(const FVertex& x) const;
};

// Throws if depth == 0.
TruncatedGraph truncate(const DesingularizedGraph& d, std::uint64_t depth);

struct FWitness {
    std::string description;
    std::optional<FVertex> vertex;
    std::optional<FPath> loop;
    std::optional<FVertex> target;
};

struct FDecision {
    bool value = false;
    std::optional<FWitness> witness;
};

// Conditions (L), (K) and cofinality decided on the infinite graph F.
FDecision condition_L_F(const DesingularizedGraph& d);
FDecision condition_K_F(const DesingularizedGraph& d);
FDecision cofinal_F(const DesingularizedGraph& d);

// Partition of s^{-1}(v0) into finite blocks S_0, S_1, ...: explicit blocks
// first, then the remaining omega copies in round-robin order, cut into
// blocks of `rest_block_size` edges. Block S_i is emitted from (v0, i).
struct PartitionSpec {
    VertexId v0 = 0;
    std::vector<std::vector<EdgeRef>> blocks;
    std::uint64_t rest_block_size = 1;
};

// Tail added with a partition: (v0,i) emits e_{i+1} plus one edge per
// element of S_i.
class PartitionedDesingularization {
  public:
    // Singular vertices without a partition get singleton blocks in
    // canonical order. Throws on an invalid partition.
    PartitionedDesingularization(Graph core, std::map<VertexId, PartitionSpec> parts);

    [[nodiscard]] const Graph& core() const noexcept { return core_; }
    [[nodiscard]] const PartitionSpec& partition(VertexId v0) const;
    // S_i for the tail at v0.
    [[nodiscard]] std::vector<EdgeRef> block(VertexId v0, std::uint64_t i) const;
    // Same layout and naming as truncate() on a DesingularizedGraph.
    [[nodiscard]] TruncatedGraph truncate(std::uint64_t depth) const;

  private:
    Graph core_;
    std::map<VertexId, PartitionSpec> parts_;
};

PartitionedDesingularization desingularize_partitioned(const Graph& g,
                                                       const std::map<VertexId, PartitionSpec>& parts);

} // namespace ckgraph
