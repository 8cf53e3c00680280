// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Dense>

#include <ckgraph/desingularize.hpp>
#include <ckgraph/graph.hpp>

namespace ckgraph {

using Matrix = Eigen::MatrixXcd;

// Finite-dimensional family. Infinite emitters may realize only some of
// their edges; every edge at a regular vertex must be present.
struct CKFamily {
    std::size_t dim = 0;
    std::map<VertexId, Matrix> p;
    std::map<EdgeRef, Matrix> s;
    double tol = 1e-12;
};

// Entrywise max-abs deviation per relation. Keys: "projection",
// "orthogonality", "isometry" (s*s = p_r), "range" (s s* <= p_s),
// "range_orthogonality", "sum" (p_v = sum s s* at regular v).
struct DefectReport {
    std::map<std::string, double> defects;
    std::map<std::string, std::string> worst; // where each maximum occurred
    double tol = 1e-12;

    [[nodiscard]] double max_defect() const;
    [[nodiscard]] bool pass() const { return max_defect() <= tol; }
};

// Path-space family on paths ending at sinks. Throws on cycles, omega
// bundles or more than `max_dim` basis paths.
CKFamily build_canonical_family(const Graph& g, std::size_t max_dim = 4096);
// Same, with each omega bundle realized by `omega_copies` copies and the
// length-zero path kept at every infinite emitter, so p_v0 strictly dominates
// the realized ranges.
CKFamily build_standin_family(const Graph& g, std::uint64_t omega_copies, std::size_t max_dim = 4096);

// Throws on missing matrices or dimension mismatch.
DefectReport check_ck_relations(const CKFamily& fam, const Graph& g);

struct ExtensionResult {
    TruncatedGraph truncation;
    // Indexed by truncation vertices and bundles. Tail(v0, m) is a sink there,
    // so relation (3) is not checked at the cut.
    CKFamily family;
    DefectReport relations;
    // "vertices" (Q_v = P_v), "regular_edges" (T_e = S_e), "alpha"
    // (S_{g_j} = T_{alpha^j}, j <= m), "tail_projection".
    std::map<std::string, double> bullets;
    // min eigenvalue of R_{n+1} - R_n and of P_{v0} - R_n, over all tails.
    double monotonicity = 0;
};

// H_F = H_E plus m copies of H_E per tail; copy n of v0 carries
// Q_{(v0,n)} = P_{v0} - R_n. Throws if some g_j, j <= m, is not realized.
ExtensionResult extend_to_F(const CKFamily& fam, const DesingularizedGraph& d, std::uint64_t m);

// T_mu T_nu* for paths of the truncation.
Matrix path_operator(const CKFamily& fam, const Path& mu, const Path& nu);
// Edge of the truncation carrying x. Throws if x lies past the cut.
EdgeRef truncated_edge(const TruncatedGraph& t, const FEdge& x);
Path truncated_path(const TruncatedGraph& t, const FPath& p);
// Inverse of truncated_path.
FPath untruncated_path(const DesingularizedGraph& d, const TruncatedGraph& t, const Path& p);

// Sum of the projections at core vertices.
Matrix corner_projection(const ExtensionResult& ext);
// Max-abs deviation of p T_mu T_nu* p from T_mu T_nu* (both sources core) or
// from 0, with p the sum of the core projections. Throws if r(mu) != r(nu).
double corner_defect(const ExtensionResult& ext, const FPath& mu, const FPath& nu);
bool corner_check(const ExtensionResult& ext, const FPath& mu, const FPath& nu);

struct CornerSample {
    std::uint64_t pairs = 0;
    std::uint64_t failures = 0;
    double worst = 0;
};

// corner_defect on `pairs` seeded random (mu, nu) with a common range, both
// drawn by walking backwards up to `max_len` edges from a random vertex of the
// truncation.
CornerSample sample_corners(const ExtensionResult& ext, const DesingularizedGraph& d, std::uint64_t pairs,
                            std::uint64_t seed, std::size_t max_len = 4);

} // namespace ckgraph
