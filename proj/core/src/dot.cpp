// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ckgraph/dot.hpp"

#include <sstream>

namespace ckgraph {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

void write_graph_body(std::ostringstream& out, const Graph& g, const VertexSet* dashed) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        out << "  n" << v << " [label=" << quote(g.name(v));
        if (dashed != nullptr && dashed->test(v)) {
            out << ", style=dashed";
        }
        out << "];\n";
    }
    for (const auto& b : g.bundles()) {
        out << "  n" << b.source << " -> n" << b.target;
        if (b.mult.is_omega()) {
            out << " [color=\"black:black\", label=\"∞\"";
            if (!b.label.empty()) {
                out << ", xlabel=" << quote(b.label);
            }
            out << "]";
        } else {
            std::string label = b.label;
            if (b.mult.count() > 1) {
                label += (label.empty() ? "" : " ") + std::string("x") + std::to_string(b.mult.count());
            }
            if (!label.empty()) {
                out << " [label=" << quote(label) << "]";
            }
        }
        out << ";\n";
    }
}

// Edges i -> j of the covering relation of a partial order given as a matrix.
void write_covers(std::ostringstream& out, const std::vector<std::vector<bool>>& below) {
    const std::size_t n = below.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !below[i][j]) {
                continue;
            }
            bool cover = true;
            for (std::size_t k = 0; k < n && cover; ++k) {
                cover = k == i || k == j || !(below[i][k] && below[k][j]);
            }
            if (cover) {
                out << "  n" << i << " -> n" << j << ";\n";
            }
        }
    }
}

} // namespace

std::string to_dot(const Graph& g) {
    std::ostringstream out;
    out << "digraph E {\n";
    write_graph_body(out, g, nullptr);
    out << "}\n";
    return out.str();
}

std::string to_dot(const TruncatedGraph& t) {
    std::ostringstream out;
    out << "digraph F {\n  rankdir=LR;\n";
    write_graph_body(out, t.graph, &t.boundary);
    out << "}\n";
    return out.str();
}

std::string to_dot_hasse(const Graph& g, const std::vector<AdmissiblePair>& pairs) {
    std::ostringstream out;
    out << "digraph pairs {\n  rankdir=BT;\n  node [shape=box];\n";
    std::vector<std::vector<bool>> below(pairs.size(), std::vector<bool>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out << "  n" << i << " [label=" << quote(describe(g, pairs[i])) << "];\n";
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            below[i][j] = pair_leq(pairs[i], pairs[j]);
        }
    }
    write_covers(out, below);
    out << "}\n";
    return out.str();
}

std::string to_dot(const PrimSpace& space) {
    std::ostringstream out;
    out << "digraph prim {\n  node [shape=box];\n";
    const std::size_t n = space.size();
    std::vector<std::vector<bool>> below(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i) {
        out << "  n" << i << " [label=" << quote(describe(space.graph(), space.points()[i])) << "];\n";
        for (std::size_t j = 0; j < n; ++j) {
            below[i][j] = space.specializes(i, j);
        }
    }
    write_covers(out, below);
    out << "}\n";
    return out.str();
}

} // namespace ckgraph
