// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Differential conformance run over seeded random graphs and tail
// enumerations. Each case draws from its own generator seeded by (seed, case),
// so cases run in any order and the report depends only on the config.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ckgraph/graph.hpp"

namespace ckgraph {

enum class FuzzMutation : std::uint8_t {
    None,
    // Remove every f_j from the truncations used as the brute-force side.
    DropExitEdges,
};

struct FuzzConfig {
    std::uint64_t seed = 1;
    std::size_t max_vertices = 6;
    std::vector<Multiplicity> palette{Multiplicity::finite(1), Multiplicity::finite(2), Multiplicity::omega()};
    double density = 0.3;
    std::uint64_t cases = 200;
    FuzzMutation mutation = FuzzMutation::None;
    unsigned threads = 0; // 0: hardware concurrency
};

struct FuzzCheck {
    std::string name;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::uint64_t skipped = 0;
    // First failing case and its graph document.
    std::optional<std::uint64_t> counterexample_case;
    std::string counterexample;
    std::string message;
};

struct FuzzReport {
    FuzzConfig config;
    std::vector<FuzzCheck> checks;

    [[nodiscard]] bool ok() const noexcept;
    [[nodiscard]] std::string text() const;
    [[nodiscard]] std::string json() const;
};

// Checks, in report order:
//   path_correspondence  phi round trips, phi_infinity keeps v >= lambda
//   condition_L          E, F symbolic and truncation agree
//   condition_K          same, skipping vertices too close to the cut
//   cofinality           cofinal_F == cofinal and every singular vertex reached
//   lattice_iso          verify_lattice_iso
//   arrow_bridge         arrow == f_arrow for singleton and full targets (K only)
FuzzReport run_fuzz(const FuzzConfig& cfg);

} // namespace ckgraph
