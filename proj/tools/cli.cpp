// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <ckgraph/ck_verifier.hpp>
#include <ckgraph/desingularize.hpp>
#include <ckgraph/dot.hpp>
#include <ckgraph/error.hpp>
#include <ckgraph/fuzz.hpp>
#include <ckgraph/ideal_lattice.hpp>
#include <ckgraph/invariants.hpp>
#include <ckgraph/io.hpp>
#include <ckgraph/prim_spectrum.hpp>

namespace ckgraph::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
    bool json = false;
    bool dot = false;
    std::string file;
    std::uint64_t depth = 0;
    std::uint64_t copies = 0;
    std::uint64_t corner_pairs = 200;
    std::uint64_t seed = 1;
    std::uint64_t cases = 200;
    std::size_t max_vertices = 6;
    unsigned threads = 0;
    std::string mutate = "none";
};

GraphDocument load(const std::string& file) {
    if (file == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return parse_graph(buf.str());
    }
    return read_graph_file(file);
}

std::string edge_text(const Graph& g, const EdgeRef& e) {
    return g.name(g.source(e)) + "->" + g.name(g.target(e)) + "#" + std::to_string(e.copy);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

json set_json(const Graph& g, const VertexSet& s) {
    json out = json::array();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (s.test(v)) {
            out.push_back(g.name(v));
        }
    }
    return out;
}

// analyze -------------------------------------------------------------------

int cmd_analyze(const Options& o, std::ostream& out) {
    const auto doc = load(o.file);
    const Graph& g = doc.graph;
    if (o.dot) {
        out << to_dot(g);
        return Pass;
    }
    const auto report = full_report(g);
    bool witnesses_ok = true;
    for (const auto& [v, w] : report.witnesses) {
        witnesses_ok = witnesses_ok && witness_is_valid(g, v, w);
    }
    const std::vector<Verdict> order{Verdict::ConditionL, Verdict::ConditionK, Verdict::Cofinal,
                                     Verdict::AllSingularReachable, Verdict::AF, Verdict::PurelyInfinite,
                                     Verdict::Simple};
    if (o.json) {
        json j;
        j["vertices"] = g.vertex_count();
        j["bundles"] = g.bundle_count();
        j["singular"] = set_json(g, singular_vertices(g));
        j["row_finite"] = is_row_finite(g);
        for (const Verdict v : order) {
            j["verdicts"][std::string(to_string(v))] = report.value(v);
        }
        for (const auto& [v, w] : report.witnesses) {
            j["witnesses"][std::string(to_string(v))] = w.description;
        }
        j["witnesses_valid"] = witnesses_ok;
        out << j.dump(2) << "\n";
    } else {
        out << "graph: " << g.vertex_count() << " vertices, " << g.bundle_count() << " bundles\n";
        out << "singular: " << describe(g, singular_vertices(g)) << "\n";
        out << "row-finite: " << yes_no(is_row_finite(g)) << "\n";
        for (const Verdict v : order) {
            out << to_string(v) << ": " << (report.value(v) ? "true" : "false");
            if (const auto it = report.witnesses.find(v); it != report.witnesses.end()) {
                out << "  (" << it->second.description << ")";
            }
            out << "\n";
        }
    }
    return witnesses_ok ? Pass : PropertyFailure;
}

// desingularize -------------------------------------------------------------

std::string tail_text(const Graph& g, const TailSpec& t) {
    std::string s = g.name(t.v0) + ": preamble [";
    for (std::size_t i = 0; i < t.preamble.size(); ++i) {
        s += (i ? ", " : "") + edge_text(g, t.preamble[i]);
    }
    s += "] period [";
    for (std::size_t i = 0; i < t.period.size(); ++i) {
        const auto& b = g.bundle(t.period[i]);
        s += (i ? ", " : "") + g.name(b.source) + "=>" + g.name(b.target);
    }
    return s + "]";
}

int cmd_desingularize(const Options& o, std::ostream& out) {
    const auto doc = load(o.file);
    const auto d = desingularize(doc.graph, doc.tails);
    const auto t = truncate(d, o.depth);
    if (o.dot) {
        out << to_dot(t);
        return Pass;
    }
    const Graph& tg = t.graph;
    if (o.json) {
        json j;
        j["depth"] = o.depth;
        j["tails"] = json::array();
        for (const auto& [v0, spec] : d.tails()) {
            j["tails"].push_back(tail_text(doc.graph, spec));
        }
        j["vertices"] = json::array();
        for (VertexId v = 0; v < tg.vertex_count(); ++v) {
            j["vertices"].push_back({{"name", tg.name(v)}, {"boundary", t.boundary.test(v)}});
        }
        j["edges"] = json::array();
        for (const auto& b : tg.bundles()) {
            j["edges"].push_back({{"name", d.edge_name(t.edge_origin[b.id])},
                                  {"src", tg.name(b.source)},
                                  {"dst", tg.name(b.target)},
                                  {"mult", b.mult.count()}});
        }
        j["condition_L"] = condition_L_F(d).value;
        j["condition_K"] = condition_K_F(d).value;
        j["cofinal"] = cofinal_F(d).value;
        out << j.dump(2) << "\n";
        return Pass;
    }
    out << "tails:\n";
    for (const auto& [v0, spec] : d.tails()) {
        out << "  " << tail_text(doc.graph, spec) << "\n";
    }
    out << "truncation at depth " << o.depth << ": " << tg.vertex_count() << " vertices, " << tg.bundle_count()
        << " bundles\n";
    for (const auto& b : tg.bundles()) {
        out << "  " << d.edge_name(t.edge_origin[b.id]) << ": " << tg.name(b.source) << " -> " << tg.name(b.target);
        if (b.mult.count() > 1) {
            out << " x" << b.mult.count();
        }
        out << "\n";
    }
    out << "F condition_L: " << (condition_L_F(d).value ? "true" : "false") << "\n";
    out << "F condition_K: " << (condition_K_F(d).value ? "true" : "false") << "\n";
    out << "F cofinal: " << (cofinal_F(d).value ? "true" : "false") << "\n";
    return Pass;
}

// ideals --------------------------------------------------------------------

int cmd_ideals(const Options& o, std::ostream& out) {
    const auto doc = load(o.file);
    const Graph& g = doc.graph;
    const auto pairs = enumerate_pairs(g);
    if (o.dot) {
        out << to_dot_hasse(g, pairs);
        return Pass;
    }
    const auto sets = enumerate_saturated_hereditary(g);
    const auto d = desingularize(g, doc.tails);
    const auto iso = verify_lattice_iso(d);
    const bool indexes = pairs_index_ideals(g);
    const VertexSet empty = g.empty_set();
    const VertexSet full = g.full_set();

    if (o.json) {
        json j;
        j["saturated_hereditary"] = json::array();
        j["proper_nonempty"] = json::array();
        j["breaking"] = json::array();
        for (const auto& h : sets) {
            j["saturated_hereditary"].push_back(set_json(g, h));
            if (h != empty && h != full) {
                j["proper_nonempty"].push_back(set_json(g, h));
            }
            const VertexSet b = breaking_candidates_BH(g, h);
            std::size_t over = 0;
            for (const auto& p : pairs) {
                over += p.H == h ? 1 : 0;
            }
            j["breaking"].push_back({{"H", set_json(g, h)}, {"B_H", set_json(g, b)}, {"pairs", over}});
        }
        j["pairs"] = json::array();
        for (const auto& p : pairs) {
            const FVertexSet f = build_HS(d, p).to_set(d);
            j["pairs"].push_back({{"H", set_json(g, p.H)},
                                  {"S", set_json(g, p.S)},
                                  {"ideal", ideal_presentation(g, p).describe(g)},
                                  {"f_set", describe(d, f)}});
        }
        j["pairs_index_ideals"] = indexes;
        if (!indexes) {
            j["note"] = "not in bijection with ideals";
        }
        j["lattice_iso"] = {{"pairs", iso.pairs},
                            {"f_sets", iso.f_sets},
                            {"bijective", iso.bijective},
                            {"order", iso.order_preserved},
                            {"meet", iso.meet_preserved},
                            {"join", iso.join_preserved},
                            {"failures", iso.failures}};
        out << j.dump(2) << "\n";
        return iso.ok() ? Pass : PropertyFailure;
    }

    out << "saturated hereditary subsets (" << sets.size() << "):\n";
    for (const auto& h : sets) {
        out << "  " << describe(g, h);
        if (h != empty && h != full) {
            out << "  B_H = " << describe(g, breaking_candidates_BH(g, h));
        }
        out << "\n";
    }
    out << "admissible pairs (" << pairs.size() << ")";
    if (!indexes) {
        out << ", not in bijection with ideals (Condition (K) fails)";
    }
    out << ":\n";
    for (const auto& p : pairs) {
        out << "  " << ideal_presentation(g, p).describe(g) << "\n";
        out << "      F-side: " << describe(d, build_HS(d, p).to_set(d)) << "\n";
    }
    out << "lattice isomorphism with F: pairs " << iso.pairs << ", F-sets " << iso.f_sets << ", bijective "
        << yes_no(iso.bijective) << ", order " << yes_no(iso.order_preserved) << ", meet "
        << yes_no(iso.meet_preserved) << ", join " << yes_no(iso.join_preserved) << "\n";
    for (const auto& f : iso.failures) {
        out << "  failure: " << f << "\n";
    }
    return iso.ok() ? Pass : PropertyFailure;
}

// primspec ------------------------------------------------------------------

std::string kind_text(const Classification& c) {
    switch (c.kind) {
    case Classification::Kind::Case1:
        return "maximal tail";
    case Classification::Kind::Case2:
        return "breaking vertex";
    case Classification::Kind::NotPrimitive:
        break;
    }
    return "not primitive";
}

int cmd_primspec(const Options& o, std::ostream& out) {
    const auto doc = load(o.file);
    const PrimSpace space(doc.graph);
    const Graph& g = space.graph();
    if (o.dot) {
        out << to_dot(space);
        return Pass;
    }
    const auto k = check_kuratowski(space);
    const std::size_t n = space.size();

    std::vector<std::string> names;
    std::vector<std::string> pairs;
    std::vector<std::string> kinds;
    std::vector<std::vector<std::string>> closures(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = space.points()[i];
        const auto p = phi_E(g, x);
        names.push_back(describe(g, x));
        pairs.push_back(describe(g, p));
        kinds.push_back(kind_text(classify_primitive(g, p)));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (space.specializes(i, j)) {
                closures[i].push_back(names[j]);
            }
        }
    }
    if (o.json) {
        json j;
        j["points"] = json::array();
        for (std::size_t i = 0; i < n; ++i) {
            j["points"].push_back(
                {{"point", names[i]}, {"pair", pairs[i]}, {"kind", kinds[i]}, {"closure", closures[i]}});
        }
        j["kuratowski"] = {{"subsets", k.subsets},
                           {"empty_closed", k.empty_closed},
                           {"extensive", k.extensive},
                           {"idempotent", k.idempotent},
                           {"additive", k.additive},
                           {"failures", k.failures}};
        out << j.dump(2) << "\n";
        return k.ok() ? Pass : PropertyFailure;
    }
    out << "points (" << n << "):\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << "  [" << i << "] " << names[i] << "  " << kinds[i] << "  " << pairs[i] << "\n";
        out << "      closure: {";
        for (std::size_t c = 0; c < closures[i].size(); ++c) {
            out << (c ? ", " : "") << closures[i][c];
        }
        out << "}\n";
    }
    out << "closure axioms over " << k.subsets << " subsets: " << (k.ok() ? "ok" : "violated") << "\n";
    for (const auto& f : k.failures) {
        out << "  failure: " << f << "\n";
    }
    return k.ok() ? Pass : PropertyFailure;
}

// verify-ck -----------------------------------------------------------------

int cmd_verify_ck(const Options& o, std::ostream& out) {
    const auto doc = load(o.file);
    const Graph& g = doc.graph;
    bool has_omega = false;
    for (const auto& b : g.bundles()) {
        has_omega = has_omega || b.mult.is_omega();
    }
    const std::uint64_t copies = o.copies ? o.copies : o.depth + 1;
    const CKFamily fam = has_omega ? build_standin_family(g, copies) : build_canonical_family(g);
    const auto base = check_ck_relations(fam, g);
    const auto d = desingularize(g, doc.tails);
    const auto ext = extend_to_F(fam, d, o.depth);
    const auto corners = sample_corners(ext, d, o.corner_pairs, o.seed);

    double worst_bullet = 0;
    for (const auto& [k, v] : ext.bullets) {
        worst_bullet = std::max(worst_bullet, v);
    }
    const bool ok = base.pass() && ext.relations.pass() && worst_bullet <= fam.tol &&
                    ext.monotonicity >= -fam.tol && corners.failures == 0;

    if (o.json) {
        json j;
        j["family"] = has_omega ? "stand-in" : "canonical";
        j["dim"] = fam.dim;
        j["depth"] = o.depth;
        j["tolerance"] = fam.tol;
        j["E_relations"] = base.defects;
        j["F_relations"] = ext.relations.defects;
        j["bullets"] = ext.bullets;
        j["monotonicity"] = ext.monotonicity;
        j["corner"] = {{"pairs", corners.pairs}, {"failures", corners.failures}, {"worst", corners.worst}};
        j["pass"] = ok;
        out << j.dump(2) << "\n";
        return ok ? Pass : PropertyFailure;
    }
    out << (has_omega ? "stand-in" : "canonical") << " family, dimension " << fam.dim << ", depth " << o.depth
        << "\n";
    const auto print = [&](const char* title, const DefectReport& r) {
        out << title << "\n";
        for (const auto& [k, v] : r.defects) {
            out << "  " << k << ": " << v;
            if (v > r.tol) {
                out << "  at " << r.worst.at(k);
            }
            out << "\n";
        }
    };
    print("relations on E:", base);
    print("relations on the truncation of F:", ext.relations);
    out << "extension identities:\n";
    for (const auto& [k, v] : ext.bullets) {
        out << "  " << k << ": " << v << "\n";
    }
    out << "monotonicity (min eigenvalue): " << ext.monotonicity << "\n";
    out << "corner: " << corners.pairs << " pairs, " << corners.failures << " failures, worst " << corners.worst
        << "\n";
    out << "result: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? Pass : PropertyFailure;
}

// fuzz ----------------------------------------------------------------------

int cmd_fuzz(const Options& o, std::ostream& out) {
    FuzzConfig cfg;
    cfg.seed = o.seed;
    cfg.cases = o.cases;
    cfg.max_vertices = o.max_vertices;
    cfg.threads = o.threads;
    cfg.mutation = o.mutate == "drop-f-edges" ? FuzzMutation::DropExitEdges : FuzzMutation::None;
    const auto report = run_fuzz(cfg);
    out << (o.json ? report.json() : report.text());
    return report.ok() ? Pass : PropertyFailure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Combinatorial analysis of graph C*-algebras", "ckgraph"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "Machine-readable output");

    const auto graph_arg = [&](CLI::App* sub) {
        sub->add_option("graph", o.file, "Graph document (JSON), - for stdin")->required();
        sub->fallthrough();
    };
    auto* analyze = app.add_subcommand("analyze", "Graph invariants and algebra verdicts");
    graph_arg(analyze);
    analyze->add_flag("--dot", o.dot, "Print the graph as DOT");

    auto* desing = app.add_subcommand("desingularize", "Attach tails and print a truncation");
    graph_arg(desing);
    desing->add_option("--depth", o.depth, "Tail depth of the truncation")->required()->check(CLI::PositiveNumber);
    desing->add_flag("--dot", o.dot, "Print the truncation as DOT");

    auto* ideals = app.add_subcommand("ideals", "Admissible pairs and the ideal lattice");
    graph_arg(ideals);
    ideals->add_flag("--dot", o.dot, "Print the Hasse diagram as DOT");

    auto* prim = app.add_subcommand("primspec", "Primitive ideal space and its closure");
    graph_arg(prim);
    prim->add_flag("--dot", o.dot, "Print the specialization order as DOT");

    auto* ck = app.add_subcommand("verify-ck", "Check a Cuntz-Krieger family and its extension");
    graph_arg(ck);
    ck->add_option("--depth", o.depth, "Number of tail copies m")->required()->check(CLI::PositiveNumber);
    ck->add_option("--copies", o.copies, "Copies per omega bundle (default depth + 1)");
    ck->add_option("--corner-pairs", o.corner_pairs, "Random path pairs for the corner check");
    ck->add_option("--seed", o.seed, "Seed for the corner check");

    auto* fuzz = app.add_subcommand("fuzz", "Seeded differential conformance run");
    fuzz->fallthrough();
    fuzz->add_option("--seed", o.seed, "Seed");
    fuzz->add_option("--cases", o.cases, "Number of random graphs");
    fuzz->add_option("--max-vertices", o.max_vertices, "Largest graph")->check(CLI::PositiveNumber);
    fuzz->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    fuzz->add_option("--mutate", o.mutate, "Harness self-test")->check(CLI::IsMember({"none", "drop-f-edges"}));

    std::vector<std::string> argv_store{"ckgraph"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Pass : InputError;
    }

    try {
        if (*analyze) {
            return cmd_analyze(o, out);
        }
        if (*desing) {
            return cmd_desingularize(o, out);
        }
        if (*ideals) {
            return cmd_ideals(o, out);
        }
        if (*prim) {
            return cmd_primspec(o, out);
        }
        if (*ck) {
            return cmd_verify_ck(o, out);
        }
        return cmd_fuzz(o, out);
    } catch (const Error& e) {
        err << "ckgraph: " << e.what() << "\n";
        return InputError;
    }
}

} // namespace ckgraph::cli
