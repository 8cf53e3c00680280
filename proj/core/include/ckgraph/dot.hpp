// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Graphviz output. Omega bundles are drawn as a double line labeled "∞";
// finite bundles with several copies carry their multiplicity in the label.

#include <string>
#include <vector>

#include "ckgraph/desingularize.hpp"
#include "ckgraph/graph.hpp"
#include "ckgraph/ideal_lattice.hpp"
#include "ckgraph/prim_spectrum.hpp"

namespace ckgraph {

std::string to_dot(const Graph& g);
// Cut vertices are dashed.
std::string to_dot(const TruncatedGraph& t);
// Hasse diagram of the pair_leq order, smallest at the bottom.
std::string to_dot_hasse(const Graph& g, const std::vector<AdmissiblePair>& pairs);
// Hasse diagram of the specialization order: an edge i -> j when j is in the
// closure of {i}.
std::string to_dot(const PrimSpace& space);

} // namespace ckgraph
