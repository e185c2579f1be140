/*
 * Copyright 2026 the mbsd-synth authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mbsd/reductions.hpp"

#include "mbsd/automata.hpp"
#include "mbsd/errors.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <deque>
#include <random>
#include <unordered_map>

namespace mbsd::reductions {

using domains::DynamicDomain;
using instance::MappingKind;
using instance::MbsdInstance;
using instance::StopAgent;

namespace {

constexpr std::uint64_t kEvenBits = 0x5555555555555555ULL; // c bits (even positions)

// Per-state conjunct masks: does this state's label satisfy side i?
std::vector<std::uint64_t> side_masks(const DynamicDomain& d,
                                      const std::vector<std::pair<ltlf::Formula, ltlf::Formula>>& cs,
                                      bool phi_side, unsigned stride, unsigned offset) {
    std::vector<std::uint64_t> m(d.num_states(), 0);
    for (std::size_t s = 0; s < d.num_states(); ++s)
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const ltlf::Formula& f = phi_side ? cs[i].first : cs[i].second;
            if (ltlf::eval_assignment(f, d.labels[s]))
                m[s] |= std::uint64_t(1) << (stride * i + offset);
        }
    return m;
}

void budget_check(std::size_t nodes, std::size_t budget) {
    if (nodes > budget)
        throw cap_error("reductions: arena exceeded the node budget of " +
                        std::to_string(budget));
}

std::uint64_t pack3(std::uint32_t s, std::uint32_t t, std::uint64_t extra) {
    return (std::uint64_t(s) << 44) | (std::uint64_t(t) << 24) | extra;
}

void check_packable(const MbsdInstance& p) {
    if (p.domain_a.num_states() >= (1u << 20) || p.domain_b.num_states() >= (1u << 20))
        throw cap_error("reductions: domain too large for the product construction");
}

} // namespace

/* ---------------- point-wise reduction ---------------- */

AnnotatedArena build_pointwise_game(const MbsdInstance& p, const ReductionCaps& caps) {
    instance::validate_instance(p);
    if (p.mapping.kind != MappingKind::PointWise)
        throw input_error("reductions: build_pointwise_game needs a point-wise mapping");

    const DynamicDomain& A = p.domain_a;
    const DynamicDomain& B = p.domain_b;
    const std::size_t nS = A.num_states(), nT = B.num_states();
    budget_check(2 * nS * nT, caps.node_budget);

    // joint per-letter check of every conjunct
    std::vector<ltlf::Formula> imps;
    for (const auto& [phi, psi] : p.mapping.conjuncts) imps.push_back(ltlf::mk_implies(phi, psi));
    ltlf::Formula check = imps.back();
    for (std::size_t i = imps.size() - 1; i-- > 0;) check = ltlf::mk_and(imps[i], check);

    AnnotatedArena g;
    g.kind = StrategyKind::Pointwise;
    g.k = static_cast<std::uint32_t>(p.mapping.conjuncts.size());
    g.objective.kind = games::ObjectiveKind::Safe;
    g.arena.p1_succ.resize(nS * nT);
    g.arena.p2_succ.resize(nS * nT);
    g.u_nodes.resize(nS * nT);
    g.v_nodes.resize(nS * nT);
    g.objective.goal.resize(nS * nT);

    auto ix = [nT](std::uint32_t s, std::uint32_t t) { return s * nT + t; };
    for (std::uint32_t s = 0; s < nS; ++s) {
        for (std::uint32_t t = 0; t < nT; ++t) {
            const std::size_t n = ix(s, t);
            g.u_nodes[n] = g.v_nodes[n] = AnnotatedArena::Node{s, t, 0, 0};
            g.objective.goal[n] =
                ltlf::eval_assignment(check, ltlf::TraceLetter::unite(A.labels[s], B.labels[t]));
            for (std::uint32_t s2 : A.succ[s]) g.arena.p1_succ[n].push_back(ix(s2, t));
            for (std::uint32_t t2 : B.succ[t]) g.arena.p2_succ[n].push_back(ix(s, t2));
            std::sort(g.arena.p1_succ[n].begin(), g.arena.p1_succ[n].end());
            std::sort(g.arena.p2_succ[n].begin(), g.arena.p2_succ[n].end());
        }
    }
    g.arena.init = ix(A.init, B.init);
    games::check_arena(g.arena);
    return g;
}

/* ---------------- target (memory-bit) reduction ---------------- */

namespace {

bool target_goal(std::uint64_t mem) {
    const std::uint64_t c = mem & kEvenBits;
    const std::uint64_t d = (mem >> 1) & kEvenBits;
    return (c & ~d) == 0; // every c_i=1 matched by d_i=1
}

} // namespace

AnnotatedArena build_target_game(const MbsdInstance& p, const ReductionCaps& caps) {
    instance::validate_instance(p);
    if (p.mapping.kind != MappingKind::Target)
        throw input_error("reductions: build_target_game needs a target mapping");
    check_packable(p);

    const DynamicDomain& A = p.domain_a;
    const DynamicDomain& B = p.domain_b;
    const std::size_t k = p.mapping.conjuncts.size();
    if (k > caps.k_cap) {
        const double est = 2.0 * double(A.num_states()) * double(B.num_states()) *
                           std::pow(4.0, double(k));
        throw cap_error("reductions: k=" + std::to_string(k) + " exceeds the memory-bit cap " +
                        std::to_string(caps.k_cap) + " (worst-case arena ~" +
                        std::to_string(est) + " nodes)");
    }

    const auto maskA = side_masks(A, p.mapping.conjuncts, true, 2, 0);  // c_i at bit 2i
    const auto maskB = side_masks(B, p.mapping.conjuncts, false, 2, 1); // d_i at bit 2i+1

    AnnotatedArena g;
    g.kind = StrategyKind::Target;
    g.k = static_cast<std::uint32_t>(k);
    g.objective.kind = games::ObjectiveKind::Reach;

    std::unordered_map<std::uint64_t, std::uint32_t> index_u, index_v;
    std::deque<std::pair<bool, std::uint32_t>> queue;
    auto intern = [&](bool is_u, AnnotatedArena::Node n) {
        auto& index = is_u ? index_u : index_v;
        auto& nodes = is_u ? g.u_nodes : g.v_nodes;
        const std::uint64_t key = pack3(n.s, n.t, n.mem);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        budget_check(g.u_nodes.size() + g.v_nodes.size() + 1, caps.node_budget);
        auto id = static_cast<std::uint32_t>(nodes.size());
        index.emplace(key, id);
        nodes.push_back(n);
        queue.emplace_back(is_u, id);
        return id;
    };

    intern(true, {A.init, B.init, maskA[A.init] | maskB[B.init], 0});
    while (!queue.empty()) {
        auto [is_u, x] = queue.front();
        queue.pop_front();
        if (is_u) {
            AnnotatedArena::Node n = g.u_nodes[x];
            if (g.arena.p1_succ.size() <= x) g.arena.p1_succ.resize(x + 1);
            for (std::uint32_t s2 : A.succ[n.s]) {
                const std::uint64_t mem = n.mem | maskA[s2];
                assert((mem & n.mem) == n.mem); // bits are monotone
                g.arena.p1_succ[x].push_back(intern(false, {s2, n.t, mem, 0}));
            }
        } else {
            AnnotatedArena::Node n = g.v_nodes[x];
            if (g.arena.p2_succ.size() <= x) g.arena.p2_succ.resize(x + 1);
            for (std::uint32_t t2 : B.succ[n.t]) {
                const std::uint64_t mem = n.mem | maskB[t2];
                assert((mem & n.mem) == n.mem);
                g.arena.p2_succ[x].push_back(intern(true, {n.s, t2, mem, 0}));
            }
        }
    }
    g.arena.p1_succ.resize(g.u_nodes.size());
    g.arena.p2_succ.resize(g.v_nodes.size());
    g.arena.init = 0;
    g.objective.goal.resize(g.u_nodes.size());
    for (std::size_t u = 0; u < g.u_nodes.size(); ++u)
        g.objective.goal[u] = target_goal(g.u_nodes[u].mem);

    // Theorem-3 shape of the construction
    if (g.u_nodes.size() + g.v_nodes.size() >
        2 * A.num_states() * B.num_states() * (std::size_t(1) << (2 * k)))
        throw std::logic_error("reductions: target arena exceeded its 4^k bound");
    games::check_arena(g.arena);
    return g;
}

/* ---------------- tree-like fast path ---------------- */

AnnotatedArena build_tree_arena(const MbsdInstance& p, const ReductionCaps& caps) {
    instance::validate_instance(p);
    if (p.mapping.kind != MappingKind::Target)
        throw input_error("reductions: the tree fast path needs a target mapping");
    if (!domains::is_tree_like(p.domain_a) || !domains::is_tree_like(p.domain_b))
        throw input_error(
            "reductions: domains are not tree-like; use the memory-bit reduction instead");
    check_packable(p);

    const DynamicDomain& A = p.domain_a;
    const DynamicDomain& B = p.domain_b;
    const std::size_t k = p.mapping.conjuncts.size();

    // "side i fired somewhere on the unique path to this state", one bit per
    // conjunct; the self-loop at a leaf repeats the state and changes nothing
    const auto satA = side_masks(A, p.mapping.conjuncts, true, 1, 0);
    const auto satB = side_masks(B, p.mapping.conjuncts, false, 1, 0);
    auto accumulate = [](const DynamicDomain& d, std::vector<std::uint64_t> sat) {
        std::deque<std::uint32_t> queue{d.init};
        std::vector<bool> seen(d.num_states(), false);
        seen[d.init] = true;
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            for (std::uint32_t c : d.succ[s])
                if (!seen[c]) {
                    seen[c] = true;
                    sat[c] |= sat[s];
                    queue.push_back(c);
                }
        }
        return sat;
    };
    const auto accA = accumulate(A, satA);
    const auto accB = accumulate(B, satB);
    const std::uint64_t all = k >= 64 ? ~0ULL : (std::uint64_t(1) << k) - 1;

    AnnotatedArena g;
    g.kind = StrategyKind::Tree;
    g.k = static_cast<std::uint32_t>(k);
    g.objective.kind = games::ObjectiveKind::Reach;

    std::unordered_map<std::uint64_t, std::uint32_t> index_u, index_v;
    std::deque<std::pair<bool, std::uint32_t>> queue;
    auto intern = [&](bool is_u, AnnotatedArena::Node n) {
        auto& index = is_u ? index_u : index_v;
        auto& nodes = is_u ? g.u_nodes : g.v_nodes;
        const std::uint64_t key = pack3(n.s, n.t, 0);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        budget_check(g.u_nodes.size() + g.v_nodes.size() + 1, caps.node_budget);
        auto id = static_cast<std::uint32_t>(nodes.size());
        index.emplace(key, id);
        nodes.push_back(n);
        queue.emplace_back(is_u, id);
        return id;
    };

    intern(true, {A.init, B.init, 0, 0});
    while (!queue.empty()) {
        auto [is_u, x] = queue.front();
        queue.pop_front();
        if (is_u) {
            AnnotatedArena::Node n = g.u_nodes[x];
            if (g.arena.p1_succ.size() <= x) g.arena.p1_succ.resize(x + 1);
            for (std::uint32_t s2 : A.succ[n.s])
                g.arena.p1_succ[x].push_back(intern(false, {s2, n.t, 0, 0}));
        } else {
            AnnotatedArena::Node n = g.v_nodes[x];
            if (g.arena.p2_succ.size() <= x) g.arena.p2_succ.resize(x + 1);
            for (std::uint32_t t2 : B.succ[n.t])
                g.arena.p2_succ[x].push_back(intern(true, {n.s, t2, 0, 0}));
        }
    }
    g.arena.p1_succ.resize(g.u_nodes.size());
    g.arena.p2_succ.resize(g.v_nodes.size());
    g.arena.init = 0;
    g.objective.goal.resize(g.u_nodes.size());
    for (std::size_t u = 0; u < g.u_nodes.size(); ++u) {
        const AnnotatedArena::Node& n = g.u_nodes[u];
        // every fired trigger answered on B's unique path
        g.objective.goal[u] = (accA[n.s] & all & ~accB[n.t]) == 0;
    }
    if (g.u_nodes.size() + g.v_nodes.size() > 2 * A.num_states() * B.num_states())
        throw std::logic_error("reductions: tree arena exceeded the plain product bound");
    games::check_arena(g.arena);
    return g;
}

/* ---------------- general (automaton) reduction ---------------- */

AnnotatedArena build_general_game(const MbsdInstance& p, const ReductionCaps& caps) {
    instance::validate_instance(p);
    check_packable(p);

    const DynamicDomain& A = p.domain_a;
    const DynamicDomain& B = p.domain_b;
    const ltlf::Formula phi = instance::mapping_formula(p.mapping);

    AnnotatedArena g;
    g.kind = StrategyKind::General;
    g.k = static_cast<std::uint32_t>(p.mapping.conjuncts.size());
    g.objective.kind = p.stop_agent == StopAgent::A ? games::ObjectiveKind::Safe
                                                    : games::ObjectiveKind::Reach;

    std::unordered_map<ltlf::Formula, std::uint32_t, ltlf::FormulaHash> res_index;
    auto intern_residual = [&](ltlf::Formula r) {
        auto it = res_index.find(r);
        if (it != res_index.end()) return it->second;
        auto id = static_cast<std::uint32_t>(g.residuals.size());
        if (id >= (1u << 24))
            throw cap_error("reductions: residual set too large for the general reduction");
        g.residuals.push_back(r);
        res_index.emplace(r, id);
        return id;
    };

    // joint labels and progression steps are memoized per (state pair) and
    // (residual, state pair) respectively — the lazy alternative to a DFA
    std::unordered_map<std::uint64_t, ltlf::TraceLetter> letter_memo;
    auto joint_label = [&](std::uint32_t s, std::uint32_t t) -> const ltlf::TraceLetter& {
        const std::uint64_t key = (std::uint64_t(s) << 32) | t;
        auto it = letter_memo.find(key);
        if (it == letter_memo.end())
            it = letter_memo.emplace(key, ltlf::TraceLetter::unite(A.labels[s], B.labels[t]))
                     .first;
        return it->second;
    };
    std::unordered_map<std::uint64_t, std::uint32_t> prog_memo;
    auto advance = [&](std::uint32_t q, std::uint32_t s, std::uint32_t t) {
        const std::uint64_t key = (std::uint64_t(q) << 40) | (std::uint64_t(s) << 20) | t;
        auto it = prog_memo.find(key);
        if (it != prog_memo.end()) return it->second;
        std::uint32_t r = intern_residual(automata::progress(g.residuals[q], joint_label(s, t)));
        prog_memo.emplace(key, r);
        return r;
    };

    std::unordered_map<std::uint64_t, std::uint32_t> index_u, index_v;
    std::deque<std::pair<bool, std::uint32_t>> queue;
    auto intern = [&](bool is_u, AnnotatedArena::Node n) {
        auto& index = is_u ? index_u : index_v;
        auto& nodes = is_u ? g.u_nodes : g.v_nodes;
        const std::uint64_t key = pack3(n.s, n.t, n.q);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        budget_check(g.u_nodes.size() + g.v_nodes.size() + 1, caps.node_budget);
        auto id = static_cast<std::uint32_t>(nodes.size());
        index.emplace(key, id);
        nodes.push_back(n);
        queue.emplace_back(is_u, id);
        return id;
    };

    const std::uint32_t r0 = intern_residual(automata::canonical(ltlf::to_nnf(phi)));
    // the initial joint label is consumed before the first move
    const std::uint32_t q0 = advance(r0, A.init, B.init);
    intern(true, {A.init, B.init, 0, q0});
    while (!queue.empty()) {
        auto [is_u, x] = queue.front();
        queue.pop_front();
        if (is_u) {
            AnnotatedArena::Node n = g.u_nodes[x];
            if (g.arena.p1_succ.size() <= x) g.arena.p1_succ.resize(x + 1);
            for (std::uint32_t s2 : A.succ[n.s])
                g.arena.p1_succ[x].push_back(intern(false, {s2, n.t, 0, n.q}));
        } else {
            AnnotatedArena::Node n = g.v_nodes[x];
            if (g.arena.p2_succ.size() <= x) g.arena.p2_succ.resize(x + 1);
            for (std::uint32_t t2 : B.succ[n.t])
                g.arena.p2_succ[x].push_back(intern(true, {n.s, t2, 0, advance(n.q, n.s, t2)}));
        }
    }
    g.arena.p1_succ.resize(g.u_nodes.size());
    g.arena.p2_succ.resize(g.v_nodes.size());
    g.arena.init = 0;
    g.objective.goal.resize(g.u_nodes.size());
    for (std::size_t u = 0; u < g.u_nodes.size(); ++u)
        g.objective.goal[u] = automata::end_accepting(g.residuals[g.u_nodes[u].q]);
    games::check_arena(g.arena);
    return g;
}

/* ---------------- strategies ---------------- */

std::string node_key(const AnnotatedArena& g, std::uint32_t v_index, const MbsdInstance& p) {
    const AnnotatedArena::Node& n = g.v_nodes.at(v_index);
    std::string key = p.domain_a.ids[n.s] + "|" + p.domain_b.ids[n.t];
    if (g.kind == StrategyKind::Target) {
        key += "|";
        for (std::uint32_t b = 0; b < 2 * g.k; ++b)
            key += (n.mem >> b) & 1 ? '1' : '0';
    } else if (g.kind == StrategyKind::General) {
        key += "|" + std::to_string(n.q);
    }
    return key;
}

MbsdStrategy lift_strategy(const MbsdInstance& p, const games::PositionalStrategy& s,
                           const AnnotatedArena& g) {
    MbsdStrategy out;
    out.kind = g.kind;
    out.k = g.k;
    out.stop_on_goal = p.stop_agent == StopAgent::B;
    for (const auto& [v, u] : s.moves)
        out.moves[node_key(g, v, p)] = p.domain_b.ids[g.u_nodes.at(u).t];
    return out;
}

namespace {

const char* kind_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::Pointwise: return "pointwise";
        case StrategyKind::Target: return "target";
        case StrategyKind::Tree: return "tree";
        case StrategyKind::General: return "general";
    }
    return "?";
}

} // namespace

nlohmann::json encode_strategy(const MbsdStrategy& s) {
    nlohmann::json doc;
    doc["kind"] = kind_name(s.kind);
    if (s.kind == StrategyKind::Target || s.kind == StrategyKind::Tree ||
        s.kind == StrategyKind::Pointwise)
        doc["k"] = s.k;
    doc["stop_on_goal"] = s.stop_on_goal;
    doc["moves"] = s.moves;
    return doc;
}

MbsdStrategy decode_strategy(const nlohmann::json& doc) {
    if (!doc.is_object()) throw input_error("strategy: document is not a JSON object");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw input_error("strategy: missing string \"kind\"");
    MbsdStrategy s;
    std::string kind = doc["kind"].get<std::string>();
    if (kind == "pointwise") s.kind = StrategyKind::Pointwise;
    else if (kind == "target") s.kind = StrategyKind::Target;
    else if (kind == "tree") s.kind = StrategyKind::Tree;
    else if (kind == "general") s.kind = StrategyKind::General;
    else throw input_error("strategy: unknown kind '" + kind + "'");
    if (doc.contains("k")) {
        if (!doc["k"].is_number_unsigned()) throw input_error("strategy: \"k\" must be a count");
        s.k = doc["k"].get<std::uint32_t>();
    }
    if (!doc.contains("stop_on_goal") || !doc["stop_on_goal"].is_boolean())
        throw input_error("strategy: missing boolean \"stop_on_goal\"");
    s.stop_on_goal = doc["stop_on_goal"].get<bool>();
    if (!doc.contains("moves") || !doc["moves"].is_object())
        throw input_error("strategy: missing \"moves\" object");
    for (const auto& [key, val] : doc["moves"].items()) {
        if (!val.is_string()) throw input_error("strategy: move target must be a state id");
        s.moves.emplace(key, val.get<std::string>());
    }
    return s;
}

/* ---------------- solving ---------------- */

namespace {

AnnotatedArena build_for(StrategyKind kind, const MbsdInstance& p, const ReductionCaps& caps) {
    switch (kind) {
        case StrategyKind::Pointwise: return build_pointwise_game(p, caps);
        case StrategyKind::Target: return build_target_game(p, caps);
        case StrategyKind::Tree: return build_tree_arena(p, caps);
        case StrategyKind::General: return build_general_game(p, caps);
    }
    throw std::logic_error("reductions: bad kind");
}

StrategyKind resolve_mode(const MbsdInstance& p, SolveMode mode) {
    switch (mode) {
        case SolveMode::Pointwise:
            if (p.mapping.kind != MappingKind::PointWise)
                throw input_error("reductions: pointwise mode needs a point-wise mapping");
            return StrategyKind::Pointwise;
        case SolveMode::Target:
            if (p.mapping.kind != MappingKind::Target)
                throw input_error("reductions: target mode needs a target mapping");
            return StrategyKind::Target;
        case SolveMode::Tree:
            if (p.mapping.kind != MappingKind::Target)
                throw input_error("reductions: tree mode needs a target mapping");
            return StrategyKind::Tree;
        case SolveMode::General: return StrategyKind::General;
        case SolveMode::Auto:
            switch (p.mapping.kind) {
                case MappingKind::PointWise: return StrategyKind::Pointwise;
                case MappingKind::Target:
                    return domains::is_tree_like(p.domain_a) && domains::is_tree_like(p.domain_b)
                               ? StrategyKind::Tree
                               : StrategyKind::Target;
                case MappingKind::General: return StrategyKind::General;
            }
    }
    throw std::logic_error("reductions: bad mode");
}

} // namespace

SolveResult solve_mbsd(const MbsdInstance& p, SolveMode mode, const ReductionCaps& caps) {
    const auto t0 = std::chrono::steady_clock::now();
    const StrategyKind kind = resolve_mode(p, mode);
    AnnotatedArena g = build_for(kind, p, caps);

    std::optional<games::PositionalStrategy> won =
        g.objective.kind == games::ObjectiveKind::Safe
            ? games::solve_safety(g.arena, g.objective.goal)
            : games::solve_reachability(g.arena, g.objective.goal);

    SolveResult r;
    r.realizable = won.has_value();
    if (won) r.strategy = lift_strategy(p, *won, g);
    r.stats.arena_nodes = g.u_nodes.size() + g.v_nodes.size();
    for (const auto& row : g.arena.p1_succ) r.stats.arena_edges += row.size();
    for (const auto& row : g.arena.p2_succ) r.stats.arena_edges += row.size();
    r.stats.dfa_states = g.residuals.size();
    r.stats.mode_used = kind_name(kind);
    r.stats.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    return r;
}

/* ---------------- execution, simulation, verification ---------------- */

namespace {

// Rebuild the annotated arena for a loaded strategy and resolve its textual
// moves into arena edges.
struct Resolved {
    AnnotatedArena g;
    games::PositionalStrategy pos;
};

Resolved resolve_strategy(const MbsdInstance& p, const MbsdStrategy& s,
                          const ReductionCaps& caps) {
    switch (s.kind) {
        case StrategyKind::Pointwise:
            if (p.mapping.kind != MappingKind::PointWise)
                throw input_error("strategy: kind does not match the instance mapping");
            break;
        case StrategyKind::Target:
        case StrategyKind::Tree:
            if (p.mapping.kind != MappingKind::Target)
                throw input_error("strategy: kind does not match the instance mapping");
            break;
        case StrategyKind::General: break;
    }
    if (s.kind != StrategyKind::General && s.k != p.mapping.conjuncts.size())
        throw input_error("strategy: k differs from the instance's conjunct count");
    if (s.stop_on_goal != (p.stop_agent == StopAgent::B))
        throw input_error("strategy: stop rule does not match the instance's stop agent");

    Resolved r{build_for(s.kind, p, caps), {}};
    std::map<std::string, std::uint32_t> v_by_key;
    for (std::uint32_t v = 0; v < r.g.v_nodes.size(); ++v)
        v_by_key.emplace(node_key(r.g, v, p), v);

    for (const auto& [key, tid] : s.moves) {
        auto vit = v_by_key.find(key);
        if (vit == v_by_key.end())
            throw input_error("strategy: move key '" + key + "' matches no arena node");
        const std::uint32_t v = vit->second;
        const std::uint32_t t2 = p.domain_b.state_index(tid);
        bool found = false;
        for (std::uint32_t u : r.g.arena.p2_succ[v]) {
            if (r.g.u_nodes[u].t == t2) {
                r.pos.moves[v] = u;
                found = true;
                break;
            }
        }
        if (!found)
            throw input_error("strategy: move '" + key + "' -> '" + tid +
                              "' is not a legal agent-B transition");
    }
    return r;
}

} // namespace

StrategyRunner::StrategyRunner(const MbsdInstance& p, const MbsdStrategy& s,
                               const ReductionCaps& caps)
    : p_(p), stop_on_goal_(s.stop_on_goal) {
    Resolved r = resolve_strategy(p, s, caps);
    g_ = std::move(r.g);
    for (const auto& [v, u] : r.pos.moves) move_by_key_.emplace(node_key(g_, v, p_), u);
    at_ = g_.arena.init;
    stopped_ = stop_on_goal_ && g_.objective.goal[at_];
}

std::uint32_t StrategyRunner::current_a() const { return g_.u_nodes[at_].s; }
std::uint32_t StrategyRunner::current_b() const { return g_.u_nodes[at_].t; }

std::uint32_t StrategyRunner::step(std::uint32_t a_state) {
    if (stopped_) throw input_error("strategy: the play has already stopped");
    std::uint32_t v_next = UINT32_MAX;
    for (std::uint32_t v : g_.arena.p1_succ[at_]) {
        if (g_.v_nodes[v].s == a_state) {
            v_next = v;
            break;
        }
    }
    if (v_next == UINT32_MAX)
        throw input_error("strategy: '" + p_.domain_a.ids.at(a_state) +
                          "' is not a legal agent-A move here");
    auto it = move_by_key_.find(node_key(g_, v_next, p_));
    if (it == move_by_key_.end())
        throw input_error("strategy: no move prescribed at node " + node_key(g_, v_next, p_));
    at_ = it->second;
    if (stop_on_goal_ && g_.objective.goal[at_]) stopped_ = true;
    return g_.u_nodes[at_].t;
}

std::uint32_t respond(const MbsdInstance& p, const MbsdStrategy& s,
                      const std::vector<std::uint32_t>& history) {
    if (history.empty()) throw input_error("strategy: history must be nonempty");
    if (history.front() != p.domain_a.init)
        throw input_error("strategy: history must start at the initial agent-A state");
    StrategyRunner run(p, s);
    for (std::size_t i = 1; i < history.size(); ++i) run.step(history[i]);
    return run.current_b();
}

ltlf::Trace JointTrace::word(const MbsdInstance& p) const {
    ltlf::Trace w;
    for (std::size_t i = 0; i < a_states.size(); ++i)
        w.push_back(ltlf::TraceLetter::unite(p.domain_a.labels[a_states[i]],
                                             p.domain_b.labels[b_states[i]]));
    return w;
}

SimResult simulate(const MbsdInstance& p, const MbsdStrategy& s, const Adversary& adv,
                   std::size_t max_steps, const ReductionCaps& caps) {
    StrategyRunner run(p, s, caps);
    SimResult r;
    r.trace.a_states.push_back(run.current_a());
    r.trace.b_states.push_back(run.current_b());

    std::mt19937 rng(static_cast<std::mt19937::result_type>(adv.seed));
    std::size_t step = 0;
    while (!run.stopped() && step < max_steps) {
        std::uint32_t next;
        if (adv.scripted) {
            if (step >= adv.script.size()) break; // adversary stops here
            next = p.domain_a.state_index(adv.script[step]);
            if (!p.domain_a.has_edge(run.current_a(), next))
                throw input_error("simulate: illegal agent-A move at step " +
                                  std::to_string(step + 1) + ": '" + adv.script[step] + "'");
        } else {
            const auto& succ = p.domain_a.succ[run.current_a()];
            next = succ[rng() % succ.size()];
        }
        r.trace.b_states.push_back(run.step(next));
        r.trace.a_states.push_back(next);
        ++step;
    }
    r.stopped = run.stopped();
    r.satisfied = ltlf::eval_trace(instance::mapping_formula(p.mapping), r.trace.word(p), 0);
    return r;
}

bool verify_mbsd(const MbsdInstance& p, const MbsdStrategy& s, std::size_t budget) {
    ReductionCaps caps;
    caps.node_budget = budget;
    Resolved r = resolve_strategy(p, s, caps);
    return games::verify_strategy(r.g.arena, r.g.objective, r.pos);
}

} // namespace mbsd::reductions
