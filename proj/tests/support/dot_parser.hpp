// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Parser for the subset of the graphviz grammar the exporters emit:
//   digraph ID { stmt* }
//   stmt := ID = ID ; | (node|edge|graph) attrs ; | ID attrs? ; | ID -> ID attrs? ;
// Throws std::runtime_error on anything else.

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dot {

using Attrs = std::map<std::string, std::string>;

struct Edge {
    std::string from;
    std::string to;
    Attrs attrs;
};

struct Document {
    std::string name;
    std::map<std::string, Attrs> nodes;
    std::vector<Edge> edges;
};

class Parser {
  public:
    explicit Parser(const std::string& text) { tokenize(text); }

    Document parse() {
        Document doc;
        expect("digraph");
        doc.name = id();
        expect("{");
        while (peek() != "}") {
            statement(doc);
        }
        expect("}");
        if (pos_ != toks_.size()) {
            throw std::runtime_error("trailing tokens");
        }
        return doc;
    }

  private:
    struct Tok {
        std::string text;
        bool quoted = false;
    };

    void tokenize(const std::string& s) {
        std::size_t i = 0;
        while (i < s.size()) {
            const char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (c == '"') {
                std::string v;
                ++i;
                while (i < s.size() && s[i] != '"') {
                    if (s[i] == '\\' && i + 1 < s.size()) {
                        ++i;
                    }
                    v += s[i++];
                }
                if (i == s.size()) {
                    throw std::runtime_error("unterminated string");
                }
                ++i;
                toks_.push_back({v, true});
            } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
                toks_.push_back({"->", false});
                i += 2;
            } else if (std::string("{}[];=,").find(c) != std::string::npos) {
                toks_.push_back({std::string(1, c), false});
                ++i;
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                std::string v;
                while (i < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.')) {
                    v += s[i++];
                }
                toks_.push_back({v, false});
            } else {
                throw std::runtime_error(std::string("unexpected character ") + c);
            }
        }
    }

    [[nodiscard]] std::string peek() const { return pos_ < toks_.size() ? toks_[pos_].text : std::string(); }

    void expect(const std::string& t) {
        if (pos_ >= toks_.size() || toks_[pos_].quoted || toks_[pos_].text != t) {
            throw std::runtime_error("expected " + t + " got " + peek());
        }
        ++pos_;
    }

    std::string id() {
        if (pos_ >= toks_.size()) {
            throw std::runtime_error("expected identifier");
        }
        const Tok& t = toks_[pos_];
        if (!t.quoted && (t.text.empty() || std::string("{}[];=,->").find(t.text[0]) != std::string::npos)) {
            throw std::runtime_error("expected identifier, got " + t.text);
        }
        ++pos_;
        return t.text;
    }

    Attrs attrs() {
        Attrs a;
        if (peek() != "[") {
            return a;
        }
        expect("[");
        while (peek() != "]") {
            const std::string k = id();
            expect("=");
            a[k] = id();
            if (peek() == ",") {
                expect(",");
            }
        }
        expect("]");
        return a;
    }

    void statement(Document& doc) {
        const std::string first = id();
        if (peek() == "=") {
            expect("=");
            id();
        } else if (first == "node" || first == "edge" || first == "graph") {
            attrs();
        } else if (peek() == "->") {
            expect("->");
            const std::string to = id();
            doc.edges.push_back(Edge{first, to, attrs()});
        } else {
            doc.nodes[first] = attrs();
        }
        expect(";");
    }

    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
};

inline Document parse(const std::string& text) { return Parser(text).parse(); }

} // namespace dot
