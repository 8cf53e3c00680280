// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ckgraph/generate.hpp"

#include <algorithm>

#include "ckgraph/error.hpp"

namespace ckgraph {

namespace {

// std::shuffle's draw pattern is unspecified; this keeps runs reproducible
// across standard libraries.
template <class T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng() % i]);
    }
}

} // namespace

Graph random_graph(std::mt19937_64& rng, const GeneratorConfig& cfg) {
    if (cfg.min_vertices == 0 || cfg.max_vertices < cfg.min_vertices || cfg.palette.empty()) {
        throw Error("invalid generator configuration");
    }
    const std::size_t n = cfg.min_vertices + rng() % (cfg.max_vertices - cfg.min_vertices + 1);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i));
    }
    const auto threshold = static_cast<std::uint64_t>(cfg.density * 1'000'000.0);
    std::vector<BundleSpec> bundles;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            if (rng() % 1'000'000 < threshold) {
                bundles.push_back(BundleSpec{static_cast<VertexId>(s), static_cast<VertexId>(t),
                                             cfg.palette[rng() % cfg.palette.size()], ""});
            }
        }
    }
    return Graph(std::move(names), std::move(bundles));
}

TailSpec random_tailspec(const Graph& g, VertexId v0, std::mt19937_64& rng) {
    TailSpec spec = canonical_tailspec(g, v0);
    fisher_yates(spec.preamble, rng);
    fisher_yates(spec.period, rng);
    return spec;
}

std::map<VertexId, TailSpec> random_tailspecs(const Graph& g, std::mt19937_64& rng) {
    std::map<VertexId, TailSpec> out;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (is_singular(g, v)) {
            out.emplace(v, random_tailspec(g, v, rng));
        }
    }
    return out;
}

} // namespace ckgraph
