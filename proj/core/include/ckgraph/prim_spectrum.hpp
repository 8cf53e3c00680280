// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <ckgraph/desingularize.hpp>
#include <ckgraph/graph.hpp>
#include <ckgraph/ideal_lattice.hpp>

namespace ckgraph {

// gamma == {v : v >= witness}.
struct MaximalTail {
    VertexSet gamma;
    EventualPath witness;
};

struct BreakingVertex {
    VertexId v0 = 0;
    // Finite edges at v0 whose range reaches v0.
    std::vector<EdgeRef> returning_edges;
};

using XiElement = std::variant<MaximalTail, BreakingVertex>;

bool is_maximal_tail(const Graph& g, const VertexSet& gamma);
// Builds a witness by walking forward until every vertex of gamma reaches the
// current vertex, then following edges inside gamma. Throws if gamma is not a
// maximal tail.
EventualPath maximal_tail_witness(const Graph& g, const VertexSet& gamma);
// All maximal tails, ordered by size then members. At most 24 vertices.
std::vector<MaximalTail> enumerate_maximal_tails(const Graph& g);
std::vector<BreakingVertex> breaking_vertices(const Graph& g);
// Maximal tails first, then breaking vertices.
std::vector<XiElement> enumerate_xi(const Graph& g);
std::string describe(const Graph& g, const XiElement& x);

// {v : v >= v0}.
VertexSet lambda_of(const Graph& g, VertexId v0);

struct Classification {
    enum class Kind : std::uint8_t { Case1, Case2, NotPrimitive };
    Kind kind = Kind::NotPrimitive;
    std::optional<VertexId> v0; // Case2
    [[nodiscard]] bool primitive() const noexcept { return kind != Kind::NotPrimitive; }
};

// Throws ConditionKError if g does not satisfy Condition (K).
Classification classify_primitive(const Graph& g, const AdmissiblePair& p);
// Throws ConditionKError if g does not satisfy Condition (K).
AdmissiblePair phi_E(const Graph& g, const XiElement& x);

// delta -> union of the points in `targets`, read off the F-side tails: the
// core of delta must reach the union of the cores, and every singular vertex
// whose whole tail lies under delta needs infinitely many edges into that
// reach set or a whole tail under some target.
bool arrow(const Graph& g, const XiElement& delta, const std::vector<XiElement>& targets);
// The definition taken literally with the union {lambda} u {v0 : v0 breaking}.
// Misses v0 -> {v0} for breaking vertices.
bool arrow_literal(const Graph& g, const XiElement& delta, const std::vector<XiElement>& targets);

// Point sets are bitmasks over enumerate_xi order.
using PointMask = std::uint64_t;

class PrimSpace {
  public:
    // Throws ConditionKError if g does not satisfy Condition (K), or Error if
    // there are more than 63 points.
    explicit PrimSpace(Graph g);

    [[nodiscard]] const Graph& graph() const noexcept { return g_; }

    [[nodiscard]] const std::vector<XiElement>& points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] PointMask closure(PointMask a) const;
    // specializes(i, j) iff point j lies in the closure of {i}.
    [[nodiscard]] bool specializes(std::size_t i, std::size_t j) const { return special_[i][j]; }

  private:
    Graph g_;
    std::vector<XiElement> points_;
    std::vector<std::vector<bool>> special_;
};

PointMask closure(const Graph& g, const std::vector<XiElement>& points, PointMask a);

struct KuratowskiReport {
    std::uint64_t subsets = 0;
    bool empty_closed = true;
    bool extensive = true;
    bool idempotent = true;
    bool additive = true;
    std::vector<std::string> failures;

    [[nodiscard]] bool ok() const noexcept { return empty_closed && extensive && idempotent && additive; }
};

// Every subset when there are at most 12 points, otherwise `samples` seeded
// random subsets and pairs.
KuratowskiReport check_kuratowski(const PrimSpace& space, std::uint64_t samples = 4096, std::uint64_t seed = 1);

// F-side maximal tail of a point, as the set of vertices reaching the image
// path (tail points) or the added tail (breaking vertices).
FVertexSet h_map(const DesingularizedGraph& d, const XiElement& x);
// h(delta) >= union of h(lambda), decided with symbolic backward reachability.
bool f_arrow(const DesingularizedGraph& d, const XiElement& delta, const std::vector<XiElement>& targets);

} // namespace ckgraph
