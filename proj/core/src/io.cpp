// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include "ckgraph/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ckgraph/error.hpp"

namespace ckgraph {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
        }
    }
    return "line " + std::to_string(line);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(path, "missing field \"" + key + "\"");
    }
    return *it;
}

std::uint64_t index_value(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) {
        throw ParseError(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

Multiplicity parse_mult(const json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() != "omega") {
            throw ParseError(path, "the only accepted string is \"omega\"");
        }
        return Multiplicity::omega();
    }
    if (j.is_number_integer() && !j.is_number_unsigned()) {
        throw ParseError(path, "multiplicity must be positive");
    }
    const std::uint64_t n = index_value(j, path);
    if (n == 0) {
        throw ParseError(path, "multiplicity must be positive");
    }
    return Multiplicity::finite(n);
}

VertexId endpoint(const std::map<std::string, VertexId>& ids, const json& j, const std::string& path) {
    if (!j.is_string()) {
        throw ParseError(path, "expected a vertex name");
    }
    const auto it = ids.find(j.get<std::string>());
    if (it == ids.end()) {
        throw ParseError(path, "unknown vertex \"" + j.get<std::string>() + "\"");
    }
    return it->second;
}

TailSpec parse_tail(const Graph& g, VertexId v0, const json& j, const std::string& path) {
    if (!j.is_object()) {
        throw ParseError(path, "expected an object");
    }
    TailSpec spec;
    spec.v0 = v0;
    if (const auto it = j.find("preamble"); it != j.end()) {
        if (!it->is_array()) {
            throw ParseError(path + ".preamble", "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = path + ".preamble[" + std::to_string(i) + "]";
            const json& e = (*it)[i];
            if (!e.is_array() || e.size() != 2) {
                throw ParseError(p, "expected [edge, copy]");
            }
            spec.preamble.push_back(EdgeRef{static_cast<BundleId>(index_value(e[0], p + "[0]")), index_value(e[1], p + "[1]")});
        }
    }
    if (const auto it = j.find("period"); it != j.end()) {
        if (!it->is_array()) {
            throw ParseError(path + ".period", "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            spec.period.push_back(
                static_cast<BundleId>(index_value((*it)[i], path + ".period[" + std::to_string(i) + "]")));
        }
    }
    if (!is_singular(g, v0)) {
        throw ParseError(path, "tail given for a regular vertex");
    }
    try {
        validate_tailspec(g, spec);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path, e.what());
    }
    return spec;
}

GraphDocument parse_document(const json& root) {
    if (!root.is_object()) {
        throw ParseError("$", "expected an object");
    }
    const json& vs = field(root, "vertices", "$");
    if (!vs.is_array()) {
        throw ParseError("vertices", "expected an array");
    }
    if (vs.empty()) {
        throw ParseError("vertices", "no vertices");
    }
    std::vector<std::string> names;
    std::map<std::string, VertexId> ids;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string p = "vertices[" + std::to_string(i) + "]";
        if (!vs[i].is_string() || vs[i].get<std::string>().empty()) {
            throw ParseError(p, "expected a non-empty name");
        }
        const auto name = vs[i].get<std::string>();
        if (!ids.emplace(name, static_cast<VertexId>(i)).second) {
            throw ParseError(p, "duplicate vertex \"" + name + "\"");
        }
        names.push_back(name);
    }

    std::vector<BundleSpec> bundles;
    if (const auto it = root.find("edges"); it != root.end()) {
        if (!it->is_array()) {
            throw ParseError("edges", "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = "edges[" + std::to_string(i) + "]";
            const json& e = (*it)[i];
            if (!e.is_object()) {
                throw ParseError(p, "expected an object");
            }
            BundleSpec b;
            b.source = endpoint(ids, field(e, "src", p), p + ".src");
            b.target = endpoint(ids, field(e, "dst", p), p + ".dst");
            b.mult = e.contains("mult") ? parse_mult(e["mult"], p + ".mult") : Multiplicity::finite(1);
            if (const auto l = e.find("label"); l != e.end()) {
                if (!l->is_string()) {
                    throw ParseError(p + ".label", "expected a string");
                }
                b.label = l->get<std::string>();
            }
            bundles.push_back(std::move(b));
        }
    }

    GraphDocument doc{Graph(std::move(names), std::move(bundles)), {}, {}};
    if (const auto it = root.find("tails"); it != root.end()) {
        if (!it->is_object()) {
            throw ParseError("tails", "expected an object");
        }
        for (const auto& [name, spec] : it->items()) {
            const std::string p = "tails." + name;
            const auto v = ids.find(name);
            if (v == ids.end()) {
                throw ParseError(p, "unknown vertex \"" + name + "\"");
            }
            doc.tails.emplace(v->second, parse_tail(doc.graph, v->second, spec, p));
        }
    }
    if (const auto it = root.find("metadata"); it != root.end()) {
        if (!it->is_object()) {
            throw ParseError("metadata", "expected an object");
        }
        doc.metadata = it->dump();
    }
    for (const auto& [key, value] : root.items()) {
        static const std::set<std::string> known{"vertices", "edges", "tails", "metadata"};
        if (!known.contains(key)) {
            throw ParseError(key, "unknown field");
        }
    }
    return doc;
}

} // namespace

GraphDocument parse_graph(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
    }
    return parse_document(root);
}

GraphDocument read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

std::string serialize_graph(const GraphDocument& doc) {
    const Graph& g = doc.graph;
    ordered_json root;
    root["vertices"] = ordered_json::array();
    for (const auto& n : g.names()) {
        root["vertices"].push_back(n);
    }
    root["edges"] = ordered_json::array();
    for (const auto& b : g.bundles()) {
        ordered_json e;
        e["src"] = g.name(b.source);
        e["dst"] = g.name(b.target);
        if (b.mult.is_omega()) {
            e["mult"] = "omega";
        } else {
            e["mult"] = b.mult.count();
        }
        if (!b.label.empty()) {
            e["label"] = b.label;
        }
        root["edges"].push_back(std::move(e));
    }
    if (!doc.tails.empty()) {
        ordered_json tails = ordered_json::object();
        for (const auto& [v0, spec] : doc.tails) {
            ordered_json t;
            t["preamble"] = ordered_json::array();
            for (const EdgeRef& e : spec.preamble) {
                t["preamble"].push_back(ordered_json::array({e.bundle, e.copy}));
            }
            t["period"] = spec.period;
            tails[g.name(v0)] = std::move(t);
        }
        root["tails"] = std::move(tails);
    }
    if (!doc.metadata.empty()) {
        root["metadata"] = ordered_json::parse(doc.metadata);
    }
    return root.dump(2) + "\n";
}

std::string serialize_graph(const Graph& g) { return serialize_graph(GraphDocument{g, {}, {}}); }

} // namespace ckgraph
