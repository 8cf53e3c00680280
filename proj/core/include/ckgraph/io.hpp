// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON graph documents. See docs/graph-format.md for the schema.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "ckgraph/desingularize.hpp"
#include "ckgraph/graph.hpp"

namespace ckgraph {

struct GraphDocument {
    Graph graph;
    // Explicit tail enumerations; other singular vertices use the canonical one.
    std::map<VertexId, TailSpec> tails;
    // Compact JSON object, empty when the document has no metadata.
    std::string metadata;

    friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

// Throws ParseError with "line N" for malformed JSON and a field path such as
// "edges[2].mult" for schema violations.
GraphDocument parse_graph(std::string_view text);
GraphDocument read_graph_file(const std::filesystem::path& path);

// Two-space indented, newline terminated, keys in schema order.
std::string serialize_graph(const GraphDocument& doc);
std::string serialize_graph(const Graph& g);

} // namespace ckgraph
