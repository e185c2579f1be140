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

#include "mbsd/games.hpp"

#include "mbsd/errors.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace mbsd::games {

void check_arena(const GameArena& a) {
    if (a.num_p1() == 0) throw input_error("games: arena has no P1 nodes");
    if (a.init >= a.num_p1()) throw input_error("games: init index out of range");
    for (const auto& row : a.p1_succ)
        for (std::uint32_t v : row)
            if (v >= a.num_p2()) throw input_error("games: alpha edge to unknown P2 node");
    for (const auto& row : a.p2_succ)
        for (std::uint32_t u : row)
            if (u >= a.num_p1()) throw input_error("games: beta edge to unknown P1 node");
}

void check_goal(const GameArena& a, const std::vector<bool>& goal) {
    if (goal.size() != a.num_p1())
        throw input_error("games: goal set size differs from the P1 node count");
}

namespace {

std::size_t edge_count(const GameArena& a) {
    std::size_t n = 0;
    for (const auto& r : a.p1_succ) n += r.size();
    for (const auto& r : a.p2_succ) n += r.size();
    return n;
}

// Reverse adjacency: for each V node the alpha-predecessors in U, and for
// each U node the beta-predecessors in V.
struct Reverse {
    std::vector<std::vector<std::uint32_t>> into_v; // U preds of each V node
    std::vector<std::vector<std::uint32_t>> into_u; // V preds of each U node
};

Reverse reverse_edges(const GameArena& a) {
    Reverse r;
    r.into_v.resize(a.num_p2());
    r.into_u.resize(a.num_p1());
    for (std::uint32_t u = 0; u < a.num_p1(); ++u)
        for (std::uint32_t v : a.p1_succ[u]) r.into_v[v].push_back(u);
    for (std::uint32_t v = 0; v < a.num_p2(); ++v)
        for (std::uint32_t u : a.p2_succ[v]) r.into_u[u].push_back(v);
    return r;
}

} // namespace

std::optional<PositionalStrategy> solve_safety(const GameArena& a,
                                               const std::vector<bool>& goal) {
    check_arena(a);
    check_goal(a, goal);
    const Reverse rev = reverse_edges(a);

    // P1 attractor of the unsafe U nodes. P1 nodes join on any attracted
    // successor; P2 nodes join when every successor is attracted (counter).
    std::vector<bool> attr_u(a.num_p1(), false), attr_v(a.num_p2(), false);
    std::vector<std::size_t> pending(a.num_p2());
    std::deque<std::pair<bool, std::uint32_t>> queue; // (is_p1, index)
    for (std::uint32_t v = 0; v < a.num_p2(); ++v) {
        pending[v] = a.p2_succ[v].size();
        if (pending[v] == 0) { // deadlocked P2 node: losing on arrival
            attr_v[v] = true;
            queue.emplace_back(false, v);
        }
    }
    for (std::uint32_t u = 0; u < a.num_p1(); ++u)
        if (!goal[u]) {
            attr_u[u] = true;
            queue.emplace_back(true, u);
        }

    std::size_t visits = 0;
    const std::size_t visit_budget = 2 * edge_count(a) + a.num_p1() + a.num_p2();
    while (!queue.empty()) {
        auto [is_p1, x] = queue.front();
        queue.pop_front();
        if (is_p1) {
            for (std::uint32_t v : rev.into_u[x]) {
                ++visits;
                if (!attr_v[v] && --pending[v] == 0) {
                    attr_v[v] = true;
                    queue.emplace_back(false, v);
                }
            }
        } else {
            for (std::uint32_t u : rev.into_v[x]) {
                ++visits;
                if (!attr_u[u]) {
                    attr_u[u] = true;
                    queue.emplace_back(true, u);
                }
            }
        }
        if (visits > visit_budget)
            throw std::logic_error("games: attractor exceeded its linear edge-visit budget");
    }

    if (attr_u[a.init]) return std::nullopt;

    // Surviving region: restrict to it and pick the lowest safe successor.
    PositionalStrategy s;
    std::vector<bool> seen_u(a.num_p1(), false), seen_v(a.num_p2(), false);
    std::deque<std::pair<bool, std::uint32_t>> bfs;
    seen_u[a.init] = true;
    bfs.emplace_back(true, a.init);
    while (!bfs.empty()) {
        auto [is_p1, x] = bfs.front();
        bfs.pop_front();
        if (is_p1) {
            for (std::uint32_t v : a.p1_succ[x])
                if (!seen_v[v]) {
                    seen_v[v] = true;
                    bfs.emplace_back(false, v);
                }
        } else {
            std::uint32_t pick = 0;
            bool found = false;
            for (std::uint32_t u : a.p2_succ[x]) {
                if (!attr_u[u] && (!found || u < pick)) { // lowest safe successor
                    pick = u;
                    found = true;
                }
            }
            if (!found) throw std::logic_error("games: surviving P2 node with no safe move");
            s.moves[x] = pick;
            if (!seen_u[pick]) {
                seen_u[pick] = true;
                bfs.emplace_back(true, pick);
            }
        }
    }
    return s;
}

std::optional<PositionalStrategy> solve_reachability(const GameArena& a,
                                                     const std::vector<bool>& goal) {
    check_arena(a);
    check_goal(a, goal);
    const Reverse rev = reverse_edges(a);

    // P2 attractor of the goal. P2 nodes join on any attracted successor
    // (rank = successor rank + 1); P1 nodes join when all successors are
    // attracted. FIFO processing yields nondecreasing ranks.
    constexpr std::uint32_t kNoRank = UINT32_MAX;
    std::vector<std::uint32_t> rank_u(a.num_p1(), kNoRank), rank_v(a.num_p2(), kNoRank);
    std::vector<std::size_t> pending(a.num_p1());
    std::deque<std::pair<bool, std::uint32_t>> queue;
    for (std::uint32_t u = 0; u < a.num_p1(); ++u) {
        pending[u] = a.p1_succ[u].size();
        if (goal[u]) {
            rank_u[u] = 0;
            queue.emplace_back(true, u);
        }
    }

    std::size_t visits = 0;
    const std::size_t visit_budget = 2 * edge_count(a) + a.num_p1() + a.num_p2();
    while (!queue.empty()) {
        auto [is_p1, x] = queue.front();
        queue.pop_front();
        if (is_p1) {
            for (std::uint32_t v : rev.into_u[x]) {
                ++visits;
                if (rank_v[v] == kNoRank) {
                    rank_v[v] = rank_u[x] + 1;
                    queue.emplace_back(false, v);
                }
            }
        } else {
            for (std::uint32_t u : rev.into_v[x]) {
                ++visits;
                if (rank_u[u] != kNoRank || goal[u]) continue;
                if (--pending[u] == 0) {
                    rank_u[u] = rank_v[x] + 1;
                    queue.emplace_back(true, u);
                }
            }
        }
        if (visits > visit_budget)
            throw std::logic_error("games: attractor exceeded its linear edge-visit budget");
    }

    if (rank_u[a.init] == kNoRank) return std::nullopt;

    // Moves strictly decrease the rank; reachable region only, cut at goal.
    PositionalStrategy s;
    std::vector<bool> seen_u(a.num_p1(), false), seen_v(a.num_p2(), false);
    std::deque<std::pair<bool, std::uint32_t>> bfs;
    seen_u[a.init] = true;
    bfs.emplace_back(true, a.init);
    while (!bfs.empty()) {
        auto [is_p1, x] = bfs.front();
        bfs.pop_front();
        if (is_p1) {
            if (goal[x]) continue; // play stops here
            for (std::uint32_t v : a.p1_succ[x])
                if (!seen_v[v]) {
                    seen_v[v] = true;
                    bfs.emplace_back(false, v);
                }
        } else {
            std::uint32_t best = kNoRank, pick = 0;
            for (std::uint32_t u : a.p2_succ[x]) {
                if (rank_u[u] < best || (rank_u[u] == best && u < pick)) {
                    best = rank_u[u];
                    pick = u;
                }
            }
            if (best == kNoRank || best >= rank_v[x])
                throw std::logic_error("games: attracted P2 node without rank-decreasing move");
            s.moves[x] = pick;
            if (!seen_u[pick]) {
                seen_u[pick] = true;
                bfs.emplace_back(true, pick);
            }
        }
    }
    return s;
}

bool verify_strategy(const GameArena& a, const WinningObjective& w,
                     const PositionalStrategy& s) {
    check_arena(a);
    check_goal(a, w.goal);
    for (const auto& [v, u] : s.moves) {
        if (v >= a.num_p2() || u >= a.num_p1())
            throw input_error("games: strategy references unknown nodes");
        if (std::find(a.p2_succ[v].begin(), a.p2_succ[v].end(), u) == a.p2_succ[v].end())
            throw input_error("games: strategy move " + std::to_string(v) + " -> " +
                              std::to_string(u) + " is not a beta edge");
    }

    if (w.kind == ObjectiveKind::Safe) {
        std::vector<bool> seen_u(a.num_p1(), false), seen_v(a.num_p2(), false);
        std::deque<std::pair<bool, std::uint32_t>> bfs;
        seen_u[a.init] = true;
        bfs.emplace_back(true, a.init);
        while (!bfs.empty()) {
            auto [is_p1, x] = bfs.front();
            bfs.pop_front();
            if (is_p1) {
                if (!w.goal[x]) return false;
                if (a.p1_succ[x].empty()) return false; // deadlock
                for (std::uint32_t v : a.p1_succ[x])
                    if (!seen_v[v]) {
                        seen_v[v] = true;
                        bfs.emplace_back(false, v);
                    }
            } else {
                auto it = s.moves.find(x);
                if (it == s.moves.end()) return false; // uncovered reachable P2 node
                if (!seen_u[it->second]) {
                    seen_u[it->second] = true;
                    bfs.emplace_back(true, it->second);
                }
            }
        }
        return true;
    }

    // Reach: iterative 3-color DFS on the restriction, exits of goal nodes
    // removed. Nodes are encoded as 2*u and 2*v+1.
    enum : std::uint8_t { White, Grey, Black };
    std::vector<std::uint8_t> color_u(a.num_p1(), White), color_v(a.num_p2(), White);
    struct Frame {
        bool is_p1;
        std::uint32_t x;
        std::size_t next_child;
    };
    std::vector<Frame> stack;
    color_u[a.init] = Grey;
    stack.push_back({true, a.init, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.is_p1) {
            if (w.goal[f.x]) { // maximal path ends here, fine
                color_u[f.x] = Black;
                stack.pop_back();
                continue;
            }
            if (a.p1_succ[f.x].empty()) return false; // stalls outside goal
            if (f.next_child < a.p1_succ[f.x].size()) {
                std::uint32_t v = a.p1_succ[f.x][f.next_child++];
                if (color_v[v] == Grey) return false; // goal-avoiding cycle
                if (color_v[v] == White) {
                    color_v[v] = Grey;
                    stack.push_back({false, v, 0});
                }
            } else {
                color_u[f.x] = Black;
                stack.pop_back();
            }
        } else {
            auto it = s.moves.find(f.x);
            if (it == s.moves.end()) return false; // play stalls before goal
            if (f.next_child == 0) {
                f.next_child = 1;
                std::uint32_t u = it->second;
                if (color_u[u] == Grey) return false;
                if (color_u[u] == White) {
                    color_u[u] = Grey;
                    stack.push_back({true, u, 0});
                }
            } else {
                color_v[f.x] = Black;
                stack.pop_back();
            }
        }
    }
    return true;
}

std::string to_dot(const GameArena& a, const WinningObjective& w) {
    std::ostringstream os;
    os << "digraph arena {\n  rankdir=LR;\n";
    for (std::uint32_t u = 0; u < a.num_p1(); ++u) {
        os << "  u" << u << " [shape=box";
        if (u < w.goal.size() && w.goal[u]) os << ", style=filled, fillcolor=lightgrey";
        os << "];\n";
    }
    for (std::uint32_t v = 0; v < a.num_p2(); ++v) os << "  v" << v << " [shape=circle];\n";
    os << "  __init [shape=point];\n  __init -> u" << a.init << ";\n";
    for (std::uint32_t u = 0; u < a.num_p1(); ++u)
        for (std::uint32_t v : a.p1_succ[u]) os << "  u" << u << " -> v" << v << ";\n";
    for (std::uint32_t v = 0; v < a.num_p2(); ++v)
        for (std::uint32_t u : a.p2_succ[v]) os << "  v" << v << " -> u" << u << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace mbsd::games
