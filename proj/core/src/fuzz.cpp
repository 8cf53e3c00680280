// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ckgraph/fuzz.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ckgraph/desingularize.hpp"
#include "ckgraph/error.hpp"
#include "ckgraph/generate.hpp"
#include "ckgraph/ideal_lattice.hpp"
#include "ckgraph/invariants.hpp"
#include "ckgraph/io.hpp"
#include "ckgraph/prim_spectrum.hpp"

namespace ckgraph {

namespace {

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"path_correspondence", "condition_L", "condition_K",
                                                "cofinality",          "lattice_iso", "arrow_bridge"};
    return names;
}

enum class Outcome : std::uint8_t { Pass, Fail, Skip };

struct CaseResult {
    std::vector<Outcome> outcomes;
    std::vector<std::string> messages;
    std::string document;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

Path random_path(const Graph& g, std::mt19937_64& rng, std::size_t max_len) {
    VertexId v = static_cast<VertexId>(rng() % g.vertex_count());
    const VertexId start = v;
    std::vector<EdgeRef> edges;
    const std::size_t len = rng() % (max_len + 1);
    for (std::size_t k = 0; k < len; ++k) {
        const auto out = g.out_bundles(v);
        if (out.empty()) {
            break;
        }
        const BundleId b = out[rng() % out.size()];
        const auto& m = g.bundle(b).mult;
        edges.push_back(EdgeRef{b, m.is_omega() ? rng() % 6 : rng() % m.count()});
        v = g.bundle(b).target;
    }
    return Path(g, start, std::move(edges));
}

std::vector<EventualPath> eventual_paths(const Graph& g) {
    std::vector<EventualPath> out;
    for (VertexId s = 0; s < g.vertex_count(); ++s) {
        for (VertexId t = 0; t < g.vertex_count(); ++t) {
            const auto p = shortest_path(g, s, t);
            if (!p) {
                continue;
            }
            if (is_singular(g, t)) {
                out.emplace_back(FinitePathToSingular(g, *p));
            }
            if (const auto c = cycle_through(g, t)) {
                out.emplace_back(Lasso(*p, *c));
            }
        }
    }
    return out;
}

// Truncation used as the brute-force side, with the mutation applied.
TruncatedGraph brute_truncation(const DesingularizedGraph& d, FuzzMutation mutation) {
    TruncatedGraph t = truncate(d, std::max<std::uint64_t>(8, d.window()));
    if (mutation != FuzzMutation::DropExitEdges) {
        return t;
    }
    std::vector<BundleSpec> kept;
    std::vector<FEdge> origin;
    for (const auto& b : t.graph.bundles()) {
        if (t.edge_origin[b.id].kind != FEdge::Kind::Exit) {
            kept.push_back(BundleSpec{b.source, b.target, b.mult, b.label});
            origin.push_back(t.edge_origin[b.id]);
        }
    }
    std::vector<std::string> names(t.graph.names().begin(), t.graph.names().end());
    return TruncatedGraph{Graph(std::move(names), std::move(kept)), t.origin, std::move(origin), t.boundary, t.depth};
}

bool truncation_K(const DesingularizedGraph& d, const TruncatedGraph& t) {
    for (VertexId i = 0; i < t.graph.vertex_count(); ++i) {
        const FVertex x = t.origin[i];
        if (!x.is_core() && x.depth + 2 * d.tail(x.v).period_size() + 1 > t.depth) {
            continue;
        }
        if (simple_loops_based_at(t.graph, i).count == 1) {
            return false;
        }
    }
    return true;
}

using Check = std::function<Outcome(std::string&)>;

CaseResult run_case(const FuzzConfig& cfg, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    GeneratorConfig gen;
    gen.max_vertices = std::max<std::size_t>(1, cfg.max_vertices);
    gen.palette = cfg.palette;
    gen.density = cfg.density;
    const Graph g = random_graph(rng, gen);
    const auto specs = random_tailspecs(g, rng);
    const DesingularizedGraph d = desingularize(g, specs);

    nlohmann::ordered_json meta;
    meta["seed"] = cfg.seed;
    meta["case"] = index;
    CaseResult result{{}, {}, serialize_graph(GraphDocument{g, specs, meta.dump()})};

    const std::vector<Check> checks{
        [&](std::string& msg) {
            std::mt19937_64 prng(rng());
            for (int k = 0; k < 10; ++k) {
                const Path p = random_path(g, prng, 6);
                if (!(phi_inv(d, phi(d, p)) == p)) {
                    msg = "phi round trip failed";
                    return Outcome::Fail;
                }
            }
            for (const auto& lambda : eventual_paths(g)) {
                const auto mu = phi_infinity(d, lambda);
                if (!(psi_infinity(d, mu) == lambda)) {
                    msg = "psi_infinity does not invert phi_infinity";
                    return Outcome::Fail;
                }
                for (VertexId v = 0; v < g.vertex_count(); ++v) {
                    if (connects_to_eventual(g, v, lambda) != f_connects_to_eventual(d, FVertex::core(v), mu)) {
                        msg = "connection to " + g.name(v) + " not preserved";
                        return Outcome::Fail;
                    }
                }
            }
            return Outcome::Pass;
        },
        [&](std::string& msg) {
            const bool e = condition_L(g).value;
            const bool f = condition_L_F(d).value;
            const bool t = condition_L(brute_truncation(d, cfg.mutation).graph).value;
            msg = "E=" + yes_no(e) + " F=" + yes_no(f) + " truncation=" + yes_no(t);
            return e == f && f == t ? Outcome::Pass : Outcome::Fail;
        },
        [&](std::string& msg) {
            const bool e = condition_K(g).value;
            const bool f = condition_K_F(d).value;
            const bool t = truncation_K(d, brute_truncation(d, cfg.mutation));
            msg = "E=" + yes_no(e) + " F=" + yes_no(f) + " truncation=" + yes_no(t);
            return e == f && f == t ? Outcome::Pass : Outcome::Fail;
        },
        [&](std::string& msg) {
            const bool e = is_cofinal(g).value && all_singular_reachable(g).value;
            const bool f = cofinal_F(d).value;
            msg = "E=" + yes_no(e) + " F=" + yes_no(f);
            return e == f ? Outcome::Pass : Outcome::Fail;
        },
        [&](std::string& msg) {
            const auto r = verify_lattice_iso(d);
            if (!r.failures.empty()) {
                msg = r.failures.front();
            }
            return r.ok() ? Outcome::Pass : Outcome::Fail;
        },
        [&](std::string& msg) {
            if (!condition_K(g).value) {
                return Outcome::Skip;
            }
            const auto points = enumerate_xi(g);
            for (const auto& delta : points) {
                for (const auto& lambda : points) {
                    if (arrow(g, delta, {lambda}) != f_arrow(d, delta, {lambda})) {
                        msg = describe(g, delta) + " -> " + describe(g, lambda);
                        return Outcome::Fail;
                    }
                }
                if (arrow(g, delta, points) != f_arrow(d, delta, points)) {
                    msg = describe(g, delta) + " -> all points";
                    return Outcome::Fail;
                }
            }
            return Outcome::Pass;
        },
    };

    for (const auto& check : checks) {
        std::string msg;
        Outcome o = Outcome::Fail;
        try {
            o = check(msg);
        } catch (const std::exception& e) {
            msg = std::string("exception: ") + e.what();
        }
        result.outcomes.push_back(o);
        result.messages.push_back(o == Outcome::Fail ? msg : std::string());
    }
    return result;
}

} // namespace

bool FuzzReport::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const FuzzCheck& c) { return c.failed == 0; });
}

std::string FuzzReport::text() const {
    std::ostringstream out;
    out << "ckgraph fuzz report\n";
    out << "seed " << config.seed << ", cases " << config.cases << ", max_vertices " << config.max_vertices
        << ", density " << config.density << ", palette {";
    for (std::size_t i = 0; i < config.palette.size(); ++i) {
        const auto& m = config.palette[i];
        out << (i ? "," : "") << (m.is_omega() ? std::string("omega") : std::to_string(m.count()));
    }
    out << "}";
    if (config.mutation == FuzzMutation::DropExitEdges) {
        out << ", mutation drop-f-edges";
    }
    out << "\n\n";
    char line[128];
    std::snprintf(line, sizeof line, "%-20s %8s %8s %8s\n", "check", "pass", "fail", "skip");
    out << line;
    for (const auto& c : checks) {
        std::snprintf(line, sizeof line, "%-20s %8llu %8llu %8llu\n", c.name.c_str(),
                      static_cast<unsigned long long>(c.passed), static_cast<unsigned long long>(c.failed),
                      static_cast<unsigned long long>(c.skipped));
        out << line;
    }
    for (const auto& c : checks) {
        if (c.counterexample_case) {
            out << "\ncounterexample for " << c.name << " (case " << *c.counterexample_case << "): " << c.message
                << "\n"
                << c.counterexample;
        }
    }
    out << "\nresult: " << (ok() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string FuzzReport::json() const {
    nlohmann::ordered_json root;
    root["seed"] = config.seed;
    root["cases"] = config.cases;
    root["max_vertices"] = config.max_vertices;
    root["density"] = config.density;
    root["mutation"] = config.mutation == FuzzMutation::DropExitEdges ? "drop-f-edges" : "none";
    root["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["pass"] = c.passed;
        j["fail"] = c.failed;
        j["skip"] = c.skipped;
        if (c.counterexample_case) {
            j["counterexample"] = {{"case", *c.counterexample_case},
                                   {"message", c.message},
                                   {"graph", nlohmann::ordered_json::parse(c.counterexample)}};
        }
        root["checks"].push_back(std::move(j));
    }
    root["ok"] = ok();
    return root.dump(2) + "\n";
}

FuzzReport run_fuzz(const FuzzConfig& cfg) {
    std::vector<CaseResult> results(cfg.cases);
    std::atomic<std::uint64_t> next{0};
    const auto worker = [&] {
        for (std::uint64_t i = next++; i < cfg.cases; i = next++) {
            results[i] = run_case(cfg, i);
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, cfg.cases)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    FuzzReport report{cfg, {}};
    for (std::size_t k = 0; k < check_names().size(); ++k) {
        FuzzCheck c;
        c.name = check_names()[k];
        for (std::uint64_t i = 0; i < cfg.cases; ++i) {
            switch (results[i].outcomes[k]) {
            case Outcome::Pass:
                ++c.passed;
                break;
            case Outcome::Skip:
                ++c.skipped;
                break;
            case Outcome::Fail:
                if (!c.counterexample_case) {
                    c.counterexample_case = i;
                    c.counterexample = results[i].document;
                    c.message = results[i].messages[k];
                }
                ++c.failed;
                break;
            }
        }
        report.checks.push_back(std::move(c));
    }
    return report;
}

} // namespace ckgraph
