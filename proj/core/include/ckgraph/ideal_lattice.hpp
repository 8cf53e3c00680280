// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <ckgraph/desingularize.hpp>
#include <ckgraph/graph.hpp>

namespace ckgraph {

bool is_hereditary(const Graph& g, const VertexSet& x);
bool is_saturated(const Graph& g, const VertexSet& x);

// Smallest hereditary superset of x.
VertexSet hereditary_closure(const Graph& g, const VertexSet& x);
// Smallest saturated superset of a hereditary x. Throws if x is not hereditary.
VertexSet saturate(const Graph& g, const VertexSet& x);

enum class EnumerationMode : std::uint8_t { Auto, Exhaustive, Generate };

// All saturated hereditary subsets, ordered by size and then by sorted member
// list. Auto filters all subsets up to 20 vertices and grows closures above.
std::vector<VertexSet> enumerate_saturated_hereditary(const Graph& g, EnumerationMode mode = EnumerationMode::Auto);

// Infinite emitters whose omega bundles all land in h and that still have at
// least one edge leaving h. Throws unless h is saturated hereditary.
VertexSet breaking_candidates_BH(const Graph& g, const VertexSet& h);

struct AdmissiblePair {
    VertexSet H;
    VertexSet S;

    friend bool operator==(const AdmissiblePair&, const AdmissiblePair&) = default;
};

// Throws unless H is saturated hereditary and S is a subset of B_H.
void validate_pair(const Graph& g, const AdmissiblePair& p);
std::string describe(const Graph& g, const AdmissiblePair& p);
std::string describe(const Graph& g, const VertexSet& x);

// Pairs grouped by H (in enumerate_saturated_hereditary order), S by mask.
std::vector<AdmissiblePair> enumerate_pairs(const Graph& g);

bool pair_leq(const AdmissiblePair& a, const AdmissiblePair& b);
// Greatest lower bound: S = (H1 u S1) n (H2 u S2) n B_H.
AdmissiblePair pair_meet(const Graph& g, const AdmissiblePair& a, const AdmissiblePair& b);
// The printed formula S = (H1 u H2 u S1 u S2) n B_H. Not a lower bound in
// general; kept for comparison.
AdmissiblePair pair_meet_literal(const Graph& g, const AdmissiblePair& a, const AdmissiblePair& b);
AdmissiblePair pair_join(const Graph& g, const AdmissiblePair& a, const AdmissiblePair& b);

// p_v for v in H, or the gap projection p_v minus the listed range projections.
struct IdealGenerator {
    VertexId v = 0;
    bool gap = false;
    std::vector<EdgeRef> subtracted;
};

struct IdealPresentation {
    AdmissiblePair pair;
    std::vector<IdealGenerator> generators;

    [[nodiscard]] std::string describe(const Graph& g) const;
};

IdealPresentation ideal_presentation(const Graph& g, const AdmissiblePair& p);

// Only for graphs with Condition (K) do pairs index the ideals.
bool pairs_index_ideals(const Graph& g);

// H_S: the core H, full tails at singular vertices of H, and {n >= N} on the
// tail of each v0 in S.
struct FSubsetPresentation {
    VertexSet core;
    VertexSet full_tails;
    std::map<VertexId, std::uint64_t> thresholds;

    [[nodiscard]] FVertexSet to_set(const DesingularizedGraph& d) const;
};

// max{j : r(g_j) not in H}; 0 when every edge of v0 lands in H.
std::uint64_t tail_threshold(const DesingularizedGraph& d, VertexId v0, const VertexSet& h);

// Throws on a non-admissible pair.
FSubsetPresentation build_HS(const DesingularizedGraph& d, const AdmissiblePair& p);
// Inverse of build_HS on saturated hereditary subsets of F.
AdmissiblePair pair_from_F(const DesingularizedGraph& d, const FVertexSet& x);

// All saturated hereditary subsets of F. On each tail such a set is empty or
// {n >= N}; candidate thresholds run over 1..P+L+2.
std::vector<FVertexSet> enumerate_F_saturated_hereditary(const DesingularizedGraph& d);

struct LatticeIsoReport {
    std::size_t pairs = 0;
    std::size_t f_sets = 0;
    bool bijective = false;
    bool order_preserved = false;
    bool meet_preserved = false;
    bool join_preserved = false;
    std::vector<std::string> failures;

    [[nodiscard]] bool ok() const noexcept { return bijective && order_preserved && meet_preserved && join_preserved; }
};

LatticeIsoReport verify_lattice_iso(const DesingularizedGraph& d);

} // namespace ckgraph
