// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Loop conditions, cofinality and the structural verdicts (AF, purely
// infinite, simple) for a finite graph. Every false verdict comes with a
// counterexample that can be re-checked with the graph-core predicates.

#include <map>
#include <optional>
#include <string>

#include "ckgraph/graph.hpp"

namespace ckgraph {

enum class Verdict {
    ConditionL,
    ConditionK,
    Cofinal,
    AllSingularReachable,
    AF,
    PurelyInfinite,
    Simple,
};

std::string_view to_string(Verdict v);

struct Witness {
    std::string description;
    std::optional<VertexId> vertex; // offending vertex, if any
    std::optional<Path> loop;       // offending loop or cycle, if any
    std::optional<VertexId> target; // unreachable vertex, if any
};

template <class T>
struct Decision {
    T value{};
    std::optional<Witness> witness; // set iff the answer is negative
};

// Every loop has an exit. The witness is an exitless loop.
Decision<bool> condition_L(const Graph& g);
// No vertex bases exactly one simple loop. The witness is such a vertex and its loop.
Decision<bool> condition_K(const Graph& g);
// Every vertex reaches every cycle (equivalently every infinite path, see
// invariants.cpp). The witness is a vertex and a cycle it misses.
Decision<bool> is_cofinal(const Graph& g);
// Every vertex reaches every singular vertex.
Decision<bool> all_singular_reachable(const Graph& g);

Decision<bool> verdict_af(const Graph& g);
Decision<bool> verdict_purely_infinite(const Graph& g);
Decision<bool> verdict_simple(const Graph& g);

struct VerdictReport {
    bool condition_L = false;
    bool condition_K = false;
    bool cofinal = false;
    bool all_singular_reachable = false;
    bool af = false;
    bool purely_infinite = false;
    bool simple = false;
    std::map<Verdict, Witness> witnesses;

    [[nodiscard]] bool value(Verdict v) const;
};

VerdictReport full_report(const Graph& g);

// Re-checks a witness against the graph-core predicates.
bool witness_is_valid(const Graph& g, Verdict v, const Witness& w);

} // namespace ckgraph
