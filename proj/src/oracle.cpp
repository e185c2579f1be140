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

#include "mbsd/oracle.hpp"

#include "mbsd/errors.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

namespace mbsd::oracle {

namespace {

struct MinmaxCtx {
    MinmaxCtx(const games::GameArena& arena, const games::WinningObjective& obj)
        : a(arena), w(obj) {}
    const games::GameArena& a;
    const games::WinningObjective& w;
    std::size_t nodes = 0;
    std::size_t deepest = 0;
    // key: node | side<<32 | remaining<<33
    std::unordered_map<std::uint64_t, bool> memo;

    bool lookup(std::uint32_t x, bool is_u, std::size_t rem, bool& out) const {
        auto it = memo.find(key(x, is_u, rem));
        if (it == memo.end()) return false;
        out = it->second;
        return true;
    }
    void store(std::uint32_t x, bool is_u, std::size_t rem, bool val) {
        memo.emplace(key(x, is_u, rem), val);
    }
    static std::uint64_t key(std::uint32_t x, bool is_u, std::size_t rem) {
        return std::uint64_t(x) | (std::uint64_t(is_u) << 32) | (std::uint64_t(rem) << 33);
    }
    void touch(std::size_t ply) {
        ++nodes;
        deepest = std::max(deepest, ply);
    }
};

// Safe: can P1 force a play onto a goal-violating P1 node within `rem` plies?
bool p1_exits_u(MinmaxCtx& c, std::uint32_t u, std::size_t rem, std::size_t ply);

bool p1_exits_v(MinmaxCtx& c, std::uint32_t v, std::size_t rem, std::size_t ply) {
    bool cached;
    if (c.lookup(v, false, rem, cached)) return cached;
    c.touch(ply);
    bool r;
    if (c.a.p2_succ[v].empty()) r = true; // P2 stuck: the play cannot stay safe
    else if (rem == 0) r = false;
    else {
        r = true;
        for (std::uint32_t u : c.a.p2_succ[v])
            if (!p1_exits_u(c, u, rem - 1, ply + 1)) { r = false; break; }
    }
    c.store(v, false, rem, r);
    return r;
}

bool p1_exits_u(MinmaxCtx& c, std::uint32_t u, std::size_t rem, std::size_t ply) {
    bool cached;
    if (c.lookup(u, true, rem, cached)) return cached;
    c.touch(ply);
    bool r = false;
    if (!c.w.goal[u]) r = true;
    else if (rem > 0) {
        for (std::uint32_t v : c.a.p1_succ[u])
            if (p1_exits_v(c, v, rem - 1, ply + 1)) { r = true; break; }
    }
    c.store(u, true, rem, r);
    return r;
}

// Reach: can P2 force a play onto a goal P1 node within `rem` plies?
bool p2_reaches_u(MinmaxCtx& c, std::uint32_t u, std::size_t rem, std::size_t ply);

bool p2_reaches_v(MinmaxCtx& c, std::uint32_t v, std::size_t rem, std::size_t ply) {
    bool cached;
    if (c.lookup(v, false, rem, cached)) return cached;
    c.touch(ply);
    bool r = false;
    if (!c.a.p2_succ[v].empty() && rem > 0) {
        for (std::uint32_t u : c.a.p2_succ[v])
            if (p2_reaches_u(c, u, rem - 1, ply + 1)) { r = true; break; }
    }
    c.store(v, false, rem, r);
    return r;
}

bool p2_reaches_u(MinmaxCtx& c, std::uint32_t u, std::size_t rem, std::size_t ply) {
    bool cached;
    if (c.lookup(u, true, rem, cached)) return cached;
    c.touch(ply);
    bool r;
    if (c.w.goal[u]) r = true;
    else if (rem == 0 || c.a.p1_succ[u].empty()) r = false; // stalls outside the goal
    else {
        r = true;
        for (std::uint32_t v : c.a.p1_succ[u])
            if (!p2_reaches_v(c, v, rem - 1, ply + 1)) { r = false; break; }
    }
    c.store(u, true, rem, r);
    return r;
}

} // namespace

OracleVerdict minmax_decide(const games::GameArena& a, const games::WinningObjective& w,
                            std::size_t depth_bound) {
    games::check_arena(a);
    games::check_goal(a, w.goal);
    if (depth_bound < 1) throw input_error("oracle: depth bound must be at least 1");

    MinmaxCtx c(a, w);
    OracleVerdict v;
    if (w.kind == games::ObjectiveKind::Safe) {
        const bool exits = p1_exits_u(c, a.init, depth_bound, 0);
        v.winner = exits ? Winner::P1 : Winner::P2;
    } else {
        const bool reaches = p2_reaches_u(c, a.init, depth_bound, 0);
        v.winner = reaches ? Winner::P2 : Winner::P1;
    }
    v.depth_used = c.deepest;
    v.nodes_expanded = c.nodes;
    v.bounded = depth_bound < 2 * (a.p1_succ.size() + a.p2_succ.size());
    return v;
}

/* ---------------- direct MBSD decision ---------------- */

namespace {

// Memoization shapes. Prefix-independence is what makes a cache entry sound:
// for an all-G(propositional) mapping every surviving prefix is
// interchangeable; for an all-(F prop -> F prop) mapping prefixes with equal
// fired-masks are interchangeable. Anything else searches without a cache.
enum class Shape { SafetyProp, TargetProp, None };

void flatten_and(ltlf::Formula f, std::vector<ltlf::Formula>& out) {
    if (f.op() == ltlf::Op::And) {
        flatten_and(f.lhs(), out);
        flatten_and(f.rhs(), out);
    } else {
        out.push_back(f);
    }
}

struct OracleCtx {
    OracleCtx(const instance::MbsdInstance& inst, ltlf::Formula f) : p(inst), phi(f) {}
    const instance::MbsdInstance& p;
    ltlf::Formula phi;
    Shape shape = Shape::None;
    // for TargetProp: the premise/conclusion of each conjunct
    std::vector<ltlf::Formula> fires_a, fires_b;
    ltlf::Trace word; // the joint word built so far (explicit stack)
    std::unordered_map<std::uint64_t, bool> memo;

    bool stops_b() const { return p.stop_agent == instance::StopAgent::B; }

    ltlf::TraceLetter letter(std::uint32_t s, std::uint32_t t) const {
        return ltlf::TraceLetter::unite(p.domain_a.labels[s], p.domain_b.labels[t]);
    }
    std::uint64_t key(std::uint32_t s, std::uint32_t t, std::uint32_t siga, std::uint32_t sigb,
                      std::size_t rem) const {
        return (std::uint64_t(s) << 56) | (std::uint64_t(t) << 48) |
               (std::uint64_t(siga) << 36) | (std::uint64_t(sigb) << 24) | std::uint64_t(rem);
    }
};

Shape detect_shape(const OracleCtx& c, std::vector<ltlf::Formula>& fa,
                   std::vector<ltlf::Formula>& fb) {
    std::vector<ltlf::Formula> cs;
    flatten_and(c.phi, cs);
    if (!c.stops_b()) {
        for (ltlf::Formula f : cs)
            if (f.op() != ltlf::Op::Globally || !ltlf::is_temporal_free(f.lhs()))
                return Shape::None;
        return Shape::SafetyProp;
    }
    if (cs.size() > 12) return Shape::None; // fired masks must fit the cache key
    for (ltlf::Formula f : cs) {
        if (f.op() != ltlf::Op::Implies) return Shape::None;
        ltlf::Formula a = f.lhs(), b = f.rhs();
        if (a.op() != ltlf::Op::Eventually || b.op() != ltlf::Op::Eventually)
            return Shape::None;
        if (!ltlf::is_temporal_free(a.lhs()) || !ltlf::is_temporal_free(b.lhs()))
            return Shape::None;
        fa.push_back(a.lhs());
        fb.push_back(b.lhs());
    }
    return Shape::TargetProp;
}

std::uint32_t fired(const std::vector<ltlf::Formula>& fs, const ltlf::TraceLetter& l) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (ltlf::eval_assignment(fs[i], l)) m |= std::uint32_t(1) << i;
    return m;
}

// B wins from the current joint prefix ending in instant (s,t). With stop
// agent B the verdict is "B can eventually stop on a satisfying prefix"; with
// stop agent A it is "every prefix A may stop at satisfies the mapping".
bool mimic_wins(OracleCtx& c, std::uint32_t s, std::uint32_t t, std::uint32_t siga,
                std::uint32_t sigb, std::size_t rem) {
    const bool cacheable = c.shape != Shape::None;
    const std::uint64_t k = cacheable ? c.key(s, t, siga, sigb, rem) : 0;
    if (cacheable) {
        auto it = c.memo.find(k);
        if (it != c.memo.end()) return it->second;
    }

    bool r;
    const bool holds_here = ltlf::eval_trace(c.phi, c.word, 0);
    if (c.stops_b() && holds_here) {
        r = true; // stop right now
    } else if (!c.stops_b() && !holds_here) {
        r = false; // A stops right now
    } else if (rem == 0) {
        r = !c.stops_b(); // out of moves: survival suffices only for stop-A
    } else {
        r = true;
        for (std::uint32_t s2 : c.p.domain_a.succ[s]) {
            bool answered = false;
            for (std::uint32_t t2 : c.p.domain_b.succ[t]) {
                const ltlf::TraceLetter l = c.letter(s2, t2);
                c.word.push_back(l);
                answered = mimic_wins(c, s2, t2, siga | fired(c.fires_a, l),
                                      sigb | fired(c.fires_b, l), rem - 1);
                c.word.pop_back();
                if (answered) break;
            }
            if (!answered) { r = false; break; }
        }
    }
    if (cacheable) c.memo.emplace(k, r);
    return r;
}

} // namespace

bool oracle_mbsd(const instance::MbsdInstance& p, std::size_t horizon) {
    instance::validate_instance(p);
    const std::size_t nS = p.domain_a.num_states(), nT = p.domain_b.num_states();
    if (nS * nT > 200)
        throw cap_error("oracle: product has " + std::to_string(nS * nT) +
                        " state pairs, the cap is 200");
    if (horizon == 0) {
        const std::size_t k = std::max<std::size_t>(p.mapping.conjuncts.size(), 1);
        switch (p.mapping.kind) {
            case instance::MappingKind::PointWise: horizon = 2 * nS * nT; break;
            case instance::MappingKind::Target: horizon = 2 * nS * nT * 2 * k; break;
            case instance::MappingKind::General:
                throw input_error("oracle: --horizon is required for general mappings");
        }
    }
    if (horizon >= (std::size_t(1) << 24))
        throw cap_error("oracle: horizon " + std::to_string(horizon) + " too large");

    OracleCtx c(p, instance::mapping_formula(p.mapping));
    c.shape = detect_shape(c, c.fires_a, c.fires_b);
    const ltlf::TraceLetter l0 = c.letter(p.domain_a.init, p.domain_b.init);
    c.word.push_back(l0);
    return mimic_wins(c, p.domain_a.init, p.domain_b.init, fired(c.fires_a, l0),
                      fired(c.fires_b, l0), horizon);
}

} // namespace mbsd::oracle
