// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include <ckgraph/ideal_lattice.hpp>

#include <algorithm>
#include <set>
#include <sstream>

#include <ckgraph/error.hpp>
#include <ckgraph/invariants.hpp>

namespace ckgraph {

namespace {

std::vector<VertexId> members(const VertexSet& x) {
    std::vector<VertexId> out;
    for (auto i = x.find_first(); i != VertexSet::npos; i = x.find_next(i)) {
        out.push_back(static_cast<VertexId>(i));
    }
    return out;
}

bool size_then_members_less(const VertexSet& a, const VertexSet& b) {
    if (a.count() != b.count()) {
        return a.count() < b.count();
    }
    return members(a) < members(b);
}

// Every target of v (omega bundles included) lies in x.
bool all_targets_in(const Graph& g, VertexId v, const VertexSet& x) {
    for (const BundleId b : g.out_bundles(v)) {
        if (!x.test(g.bundle(b).target)) {
            return false;
        }
    }
    return true;
}

void check_size(const Graph& g, const VertexSet& x) {
    if (x.size() != g.vertex_count()) {
        throw Error("vertex set does not match the graph");
    }
}

std::string edge_name(const Graph& g, const EdgeRef& e) {
    const auto& b = g.bundle(e.bundle);
    std::string base = b.label.empty() ? g.name(b.source) + "->" + g.name(b.target) : b.label;
    if (b.mult.is_omega() || b.mult.count() > 1) {
        base += "#" + std::to_string(e.copy + 1);
    }
    return base;
}

} // namespace

bool is_hereditary(const Graph& g, const VertexSet& x) {
    check_size(g, x);
    for (const auto& b : g.bundles()) {
        if (x.test(b.source) && !x.test(b.target)) {
            return false;
        }
    }
    return true;
}

bool is_saturated(const Graph& g, const VertexSet& x) {
    check_size(g, x);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!x.test(v) && !is_singular(g, v) && all_targets_in(g, v, x)) {
            return false;
        }
    }
    return true;
}

VertexSet hereditary_closure(const Graph& g, const VertexSet& x) {
    check_size(g, x);
    VertexSet out = g.empty_set();
    for (const VertexId v : members(x)) {
        out |= g.reach_set(v);
    }
    return out;
}

VertexSet saturate(const Graph& g, const VertexSet& x) {
    if (!is_hereditary(g, x)) {
        throw Error("saturate needs a hereditary set");
    }
    VertexSet out = x;
    for (bool grew = true; grew;) {
        grew = false;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (!out.test(v) && !is_singular(g, v) && all_targets_in(g, v, out)) {
                out.set(v);
                grew = true;
            }
        }
    }
    return out;
}

std::vector<VertexSet> enumerate_saturated_hereditary(const Graph& g, EnumerationMode mode) {
    const std::size_t n = g.vertex_count();
    if (mode == EnumerationMode::Auto) {
        mode = n <= 20 ? EnumerationMode::Exhaustive : EnumerationMode::Generate;
    }
    std::vector<VertexSet> out;
    if (mode == EnumerationMode::Exhaustive) {
        if (n > 30) {
            throw Error("too many vertices for exhaustive enumeration");
        }
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            const VertexSet x(n, mask);
            if (is_hereditary(g, x) && is_saturated(g, x)) {
                out.push_back(x);
            }
        }
    } else {
        // Each saturated hereditary T is reached from any proper saturated
        // hereditary H inside it by adding one vertex of T and closing.
        std::set<VertexSet> seen{g.empty_set()};
        std::vector<VertexSet> todo{g.empty_set()};
        while (!todo.empty()) {
            const VertexSet h = todo.back();
            todo.pop_back();
            for (VertexId v = 0; v < n; ++v) {
                if (h.test(v)) {
                    continue;
                }
                VertexSet next = h;
                next.set(v);
                next = saturate(g, hereditary_closure(g, next));
                if (seen.insert(next).second) {
                    todo.push_back(next);
                }
            }
        }
        out.assign(seen.begin(), seen.end());
    }
    std::sort(out.begin(), out.end(), size_then_members_less);
    return out;
}

VertexSet breaking_candidates_BH(const Graph& g, const VertexSet& h) {
    if (!is_hereditary(g, h) || !is_saturated(g, h)) {
        throw Error("B_H needs a saturated hereditary set");
    }
    VertexSet out = g.empty_set();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (!is_infinite_emitter(g, v)) {
            continue;
        }
        bool omega_inside = true;
        bool finite_outside = false;
        for (const BundleId b : g.out_bundles(v)) {
            const auto& bundle = g.bundle(b);
            if (bundle.mult.is_omega()) {
                omega_inside = omega_inside && h.test(bundle.target);
            } else if (!h.test(bundle.target)) {
                finite_outside = true;
            }
        }
        if (omega_inside && finite_outside) {
            out.set(v);
        }
    }
    return out;
}

void validate_pair(const Graph& g, const AdmissiblePair& p) {
    check_size(g, p.H);
    check_size(g, p.S);
    const VertexSet b = breaking_candidates_BH(g, p.H);
    if (!p.S.is_subset_of(b)) {
        throw Error("S is not a subset of B_H");
    }
}

std::string describe(const Graph& g, const VertexSet& x) {
    std::string out = "{";
    bool first = true;
    for (const VertexId v : members(x)) {
        out += (first ? "" : ",") + g.name(v);
        first = false;
    }
    return out + "}";
}

std::string describe(const Graph& g, const AdmissiblePair& p) {
    return "(" + describe(g, p.H) + ", " + describe(g, p.S) + ")";
}

std::vector<AdmissiblePair> enumerate_pairs(const Graph& g) {
    std::vector<AdmissiblePair> out;
    for (const VertexSet& h : enumerate_saturated_hereditary(g)) {
        const auto b = members(breaking_candidates_BH(g, h));
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << b.size()); ++mask) {
            VertexSet s = g.empty_set();
            for (std::size_t i = 0; i < b.size(); ++i) {
                if ((mask >> i) & 1U) {
                    s.set(b[i]);
                }
            }
            out.push_back(AdmissiblePair{h, s});
        }
    }
    return out;
}

bool pair_leq(const AdmissiblePair& a, const AdmissiblePair& b) {
    return a.H.is_subset_of(b.H) && a.S.is_subset_of(b.H | b.S);
}

AdmissiblePair pair_meet(const Graph& g, const AdmissiblePair& a, const AdmissiblePair& b) {
    const VertexSet h = a.H & b.H;
    return AdmissiblePair{h, (a.H | a.S) & (b.H | b.S) & breaking_candidates_BH(g, h)};
}

AdmissiblePair pair_meet_literal(const Graph& g, const AdmissiblePair& a, const AdmissiblePair& b) {
    const VertexSet h = a.H & b.H;
    return AdmissiblePair{h, (a.H | b.H | a.S | b.S) & breaking_candidates_BH(g, h)};
}

AdmissiblePair pair_join(const Graph& g, const AdmissiblePair& a, const AdmissiblePair& b) {
    const VertexSet s = a.S | b.S;
    VertexSet x = a.H | b.H;
    for (bool grew = true; grew;) {
        grew = false;
        VertexSet next = x;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (x.test(v)) {
                continue;
            }
            const bool regular = !is_singular(g, v);
            if ((regular || s.test(v)) && all_targets_in(g, v, x)) {
                next.set(v);
                grew = true;
            }
        }
        x = next;
    }
    return AdmissiblePair{x, s & breaking_candidates_BH(g, x)};
}

IdealPresentation ideal_presentation(const Graph& g, const AdmissiblePair& p) {
    validate_pair(g, p);
    IdealPresentation out{p, {}};
    for (const VertexId v : members(p.H)) {
        out.generators.push_back(IdealGenerator{v, false, {}});
    }
    for (const VertexId v : members(p.S)) {
        IdealGenerator gen{v, true, {}};
        for (const BundleId b : g.out_bundles(v)) {
            const auto& bundle = g.bundle(b);
            if (p.H.test(bundle.target)) {
                continue;
            }
            // v is in B_H, so bundles leaving H are finite.
            for (std::uint64_t c = 0; c < bundle.mult.count(); ++c) {
                gen.subtracted.push_back(EdgeRef{b, c});
            }
        }
        out.generators.push_back(std::move(gen));
    }
    return out;
}

std::string IdealPresentation::describe(const Graph& g) const {
    std::ostringstream os;
    os << "I" << ckgraph::describe(g, pair) << " = <";
    bool first = true;
    for (const auto& gen : generators) {
        os << (first ? "" : ", ");
        first = false;
        if (!gen.gap) {
            os << "p_" << g.name(gen.v);
            continue;
        }
        os << "p_" << g.name(gen.v);
        for (const EdgeRef& e : gen.subtracted) {
            const std::string n = edge_name(g, e);
            os << " - s_" << n << " s_" << n << "*";
        }
    }
    os << ">";
    return os.str();
}

bool pairs_index_ideals(const Graph& g) {
    return condition_K(g).value;
}

FVertexSet FSubsetPresentation::to_set(const DesingularizedGraph& d) const {
    FVertexSet out = f_empty_set(d);
    out.core = core;
    for (auto& [v0, t] : out.tails) {
        if (full_tails.test(v0)) {
            t = TailSubset::all();
        } else if (const auto it = thresholds.find(v0); it != thresholds.end()) {
            t = TailSubset::at_least(it->second);
        }
    }
    return out;
}

std::uint64_t tail_threshold(const DesingularizedGraph& d, VertexId v0, const VertexSet& h) {
    const Graph& g = d.core();
    const TailSpec& spec = d.tail(v0);
    std::uint64_t n = 0;
    for (std::uint64_t j = 1; j <= spec.preamble_size(); ++j) {
        if (!h.test(g.target(spec.edge(j)))) {
            n = j;
        }
    }
    for (const BundleId b : spec.period) {
        if (!h.test(g.bundle(b).target)) {
            throw Error("tail of " + g.name(v0) + " leaves H infinitely often");
        }
    }
    return n;
}

FSubsetPresentation build_HS(const DesingularizedGraph& d, const AdmissiblePair& p) {
    const Graph& g = d.core();
    validate_pair(g, p);
    FSubsetPresentation out{p.H, g.empty_set(), {}};
    for (const auto& kv : d.tails()) {
        const VertexId v0 = kv.first;
        if (p.H.test(v0)) {
            out.full_tails.set(v0);
        } else if (p.S.test(v0)) {
            // v0 is in B_H, so some finite edge leaves H and the threshold is >= 1.
            out.thresholds.emplace(v0, tail_threshold(d, v0, p.H));
        }
    }
    return out;
}

AdmissiblePair pair_from_F(const DesingularizedGraph& d, const FVertexSet& x) {
    const Graph& g = d.core();
    AdmissiblePair out{x.core, g.empty_set()};
    for (const auto& [v0, t] : x.tails) {
        if (!x.core.test(v0) && !t.is_empty()) {
            out.S.set(v0);
        }
    }
    return out;
}

namespace {

// Hereditary and saturated at core vertices without a tail; only the core
// part of a candidate matters there.
bool core_ok(const DesingularizedGraph& d, const VertexSet& c) {
    const Graph& g = d.core();
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (d.has_tail(v)) {
            continue;
        }
        const bool inside = all_targets_in(g, v, c);
        if (c.test(v) != inside) {
            return false;
        }
    }
    return true;
}

// Hereditary and saturated at v0 and along its tail, for x whose tail at v0 is
// the candidate. Depths past the bound repeat.
bool tail_ok(const DesingularizedGraph& d, const FVertexSet& x, VertexId v0) {
    const std::uint64_t bound = f_check_depth(d, x, v0) + 1;
    for (std::uint64_t n = 0; n <= bound; ++n) {
        const FVertex u{v0, n};
        bool inside = true;
        for (const FEdge& e : d.out_edges(u)) {
            inside = inside && x.contains(d.target(e));
        }
        if (x.contains(u) != inside) {
            return false;
        }
    }
    return true;
}

} // namespace

std::vector<FVertexSet> enumerate_F_saturated_hereditary(const DesingularizedGraph& d) {
    const Graph& g = d.core();
    const std::size_t n = g.vertex_count();
    std::vector<VertexSet> cores;
    if (n <= 16) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            cores.emplace_back(n, mask);
        }
    } else {
        // Too many core subsets; restrict to saturated hereditary sets of E.
        cores = enumerate_saturated_hereditary(g);
    }
    std::vector<FVertexSet> out;
    for (const VertexSet& c : cores) {
        if (!core_ok(d, c)) {
            continue;
        }
        FVertexSet base = f_empty_set(d);
        base.core = c;
        std::vector<std::pair<VertexId, std::vector<TailSubset>>> choices;
        bool feasible = true;
        for (const auto& [v0, spec] : d.tails()) {
            std::vector<TailSubset> ok;
            std::vector<TailSubset> candidates{TailSubset::none()};
            for (std::uint64_t k = 1; k <= spec.preamble_size() + spec.period_size() + 2; ++k) {
                candidates.push_back(TailSubset::at_least(k));
            }
            for (const TailSubset& t : candidates) {
                FVertexSet x = base;
                x.tails[v0] = t;
                if (tail_ok(d, x, v0)) {
                    ok.push_back(t);
                }
            }
            if (ok.empty()) {
                feasible = false;
                break;
            }
            choices.emplace_back(v0, std::move(ok));
        }
        if (!feasible) {
            continue;
        }
        std::vector<std::size_t> idx(choices.size(), 0);
        while (true) {
            FVertexSet x = base;
            for (std::size_t i = 0; i < choices.size(); ++i) {
                x.tails[choices[i].first] = choices[i].second[idx[i]];
            }
            out.push_back(std::move(x));
            std::size_t i = 0;
            while (i < idx.size() && ++idx[i] == choices[i].second.size()) {
                idx[i++] = 0;
            }
            if (i == idx.size()) {
                break;
            }
        }
    }
    return out;
}

LatticeIsoReport verify_lattice_iso(const DesingularizedGraph& d) {
    const Graph& g = d.core();
    LatticeIsoReport r;
    const auto pairs = enumerate_pairs(g);
    const auto fsets = enumerate_F_saturated_hereditary(d);
    r.pairs = pairs.size();
    r.f_sets = fsets.size();

    std::vector<FVertexSet> image;
    for (const auto& p : pairs) {
        image.push_back(build_HS(d, p).to_set(d));
    }
    const auto index_of = [&](const FVertexSet& x) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < fsets.size(); ++i) {
            if (fsets[i] == x) {
                return i;
            }
        }
        return std::nullopt;
    };

    r.bijective = pairs.size() == fsets.size();
    if (!r.bijective) {
        r.failures.push_back(std::to_string(pairs.size()) + " pairs but " + std::to_string(fsets.size()) +
                             " saturated hereditary subsets of F");
    }
    std::vector<bool> hit(fsets.size(), false);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto at = index_of(image[i]);
        if (!at) {
            r.bijective = false;
            r.failures.push_back("H_S of " + describe(g, pairs[i]) + " is not saturated hereditary in F");
            continue;
        }
        if (hit[*at]) {
            r.bijective = false;
            r.failures.push_back("H_S of " + describe(g, pairs[i]) + " repeats");
        }
        hit[*at] = true;
        if (!(pair_from_F(d, image[i]) == pairs[i])) {
            r.bijective = false;
            r.failures.push_back("pair_from_F does not invert H_S at " + describe(g, pairs[i]));
        }
    }

    r.order_preserved = true;
    r.meet_preserved = true;
    r.join_preserved = true;
    const auto position = [&](const AdmissiblePair& p) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (pairs[i] == p) {
                return i;
            }
        }
        return std::nullopt;
    };
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            const std::string at = describe(g, pairs[i]) + " and " + describe(g, pairs[j]);
            if (pair_leq(pairs[i], pairs[j]) != image[i].subset_of(image[j])) {
                r.order_preserved = false;
                r.failures.push_back("order differs at " + at);
            }
            const auto m = position(pair_meet(g, pairs[i], pairs[j]));
            if (!m || !(image[*m] == (image[i] & image[j]))) {
                r.meet_preserved = false;
                r.failures.push_back("meet differs at " + at);
            }
            // Least saturated hereditary subset of F above both images.
            const FVertexSet u = image[i] | image[j];
            std::optional<FVertexSet> least;
            for (const auto& x : fsets) {
                if (u.subset_of(x) && (!least || x.subset_of(*least))) {
                    least = x;
                }
            }
            for (const auto& x : fsets) {
                if (least && u.subset_of(x) && !least->subset_of(x)) {
                    least.reset();
                    break;
                }
            }
            const auto jn = position(pair_join(g, pairs[i], pairs[j]));
            if (!jn || !least || !(image[*jn] == *least)) {
                r.join_preserved = false;
                r.failures.push_back("join differs at " + at);
            }
        }
    }
    return r;
}

} // namespace ckgraph
