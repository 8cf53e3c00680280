// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <ckgraph/fuzz.hpp>
#include <ckgraph/io.hpp>

using namespace ckgraph;

namespace {

const FuzzCheck& check_named(const FuzzReport& r, const std::string& name) {
    for (const auto& c : r.checks) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::runtime_error("no check " + name);
}

} // namespace

TEST_CASE("seed 1 with 200 cases passes every check") {
    FuzzConfig cfg;
    const auto r = run_fuzz(cfg);
    CHECK(r.ok());
    REQUIRE(r.checks.size() == 6);
    for (const auto& c : r.checks) {
        CHECK_MESSAGE(c.failed == 0, c.name << ": " << c.message);
        CHECK(c.passed + c.skipped == 200);
    }
    CHECK(check_named(r, "path_correspondence").skipped == 0);
    CHECK(check_named(r, "arrow_bridge").passed > 100);
}

TEST_CASE("reports do not depend on the thread count") {
    FuzzConfig cfg;
    cfg.cases = 120;
    cfg.seed = 99;
    cfg.threads = 1;
    const auto a = run_fuzz(cfg);
    cfg.threads = 4;
    const auto b = run_fuzz(cfg);
    CHECK(a.text() == b.text());
    CHECK(a.json() == b.json());
    cfg.seed = 100;
    CHECK(run_fuzz(cfg).text() != a.text());
}

TEST_CASE("dropping f-edges is caught with a counterexample") {
    FuzzConfig cfg;
    cfg.mutation = FuzzMutation::DropExitEdges;
    const auto r = run_fuzz(cfg);
    CHECK_FALSE(r.ok());
    const auto& k = check_named(r, "condition_K");
    CHECK(k.failed > 0);
    REQUIRE(k.counterexample_case.has_value());
    // The counterexample is a loadable document that passes unmutated.
    const auto doc = parse_graph(k.counterexample);
    CHECK(doc.graph.vertex_count() >= 1);
    CHECK(r.text().find("counterexample for condition_K") != std::string::npos);
    CHECK(r.text().find("result: FAIL") != std::string::npos);
}

TEST_CASE("single vertex graphs pass") {
    FuzzConfig cfg;
    cfg.max_vertices = 1;
    cfg.cases = 100;
    const auto r = run_fuzz(cfg);
    CHECK(r.ok());
    CHECK(check_named(r, "arrow_bridge").failed == 0);
}
