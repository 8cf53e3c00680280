// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ckgraph/graph.hpp>

namespace fixtures {

using ckgraph::BundleSpec;
using ckgraph::Graph;
using ckgraph::Multiplicity;

inline Multiplicity one() { return Multiplicity::finite(1); }
inline Multiplicity omega() { return Multiplicity::omega(); }

// v <-> w, both emitting omega edges into the sink x.
inline Graph e_prim() {
    return Graph({"v", "w", "x"}, {
                                      BundleSpec{0, 1, one(), "v->w"},
                                      BundleSpec{1, 0, one(), "w->v"},
                                      BundleSpec{0, 2, omega(), "v=>x"},
                                      BundleSpec{1, 2, omega(), "w=>x"},
                                  });
}

// Fragment around v0: two loops g1, g2, g3 to w3, omega edges to w4.
inline Graph e_main() {
    return Graph({"w1", "w2", "v0", "w3", "w4"}, {
                                                     BundleSpec{0, 2, one(), ""},
                                                     BundleSpec{1, 2, one(), ""},
                                                     BundleSpec{2, 2, one(), "g1"},
                                                     BundleSpec{2, 2, one(), "g2"},
                                                     BundleSpec{2, 3, one(), "g3"},
                                                     BundleSpec{2, 4, omega(), "g4+"},
                                                 });
}

// One vertex with infinitely many loops.
inline Graph o_infinity() { return Graph({"u"}, {BundleSpec{0, 0, omega(), ""}}); }

inline Graph single_loop() { return Graph({"u"}, {BundleSpec{0, 0, one(), ""}}); }

inline Graph single_vertex() { return Graph({"u"}, {}); }

// a -> x with x a sink.
inline Graph sink_edge() { return Graph({"a", "x"}, {BundleSpec{0, 1, one(), ""}}); }

// v0 => x with omega edges and x a sink: two singular vertices.
inline Graph omega_to_sink() { return Graph({"v0", "x"}, {BundleSpec{0, 1, omega(), ""}}); }

inline Graph discrete(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("d" + std::to_string(i));
    }
    return Graph(std::move(names), {});
}

} // namespace fixtures
