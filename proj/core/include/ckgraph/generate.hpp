// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded random graphs and tail enumerations for differential testing.

#include <map>
#include <random>
#include <vector>

#include "ckgraph/desingularize.hpp"
#include "ckgraph/graph.hpp"

namespace ckgraph {

struct GeneratorConfig {
    std::size_t min_vertices = 1;
    std::size_t max_vertices = 6;
    std::vector<Multiplicity> palette{Multiplicity::finite(1), Multiplicity::finite(2), Multiplicity::omega()};
    double density = 0.3; // probability of a bundle per ordered vertex pair
};

// Vertices are named v0, v1, ...
Graph random_graph(std::mt19937_64& rng, const GeneratorConfig& cfg);
// Uniformly shuffled preamble and period for v0.
TailSpec random_tailspec(const Graph& g, VertexId v0, std::mt19937_64& rng);
std::map<VertexId, TailSpec> random_tailspecs(const Graph& g, std::mt19937_64& rng);

} // namespace ckgraph
