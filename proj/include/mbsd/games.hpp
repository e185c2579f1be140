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

#ifndef MBSD_GAMES_HPP
#define MBSD_GAMES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mbsd::games {

// Turn-based bipartite arena. P1 owns U (moves along alpha = p1_succ),
// P2 owns V (beta = p2_succ). Plays start at init in U and end at U nodes;
// the length-0 play consisting of init alone counts as a play.
struct GameArena {
    std::uint32_t init = 0;
    std::vector<std::vector<std::uint32_t>> p1_succ; // U -> V
    std::vector<std::vector<std::uint32_t>> p2_succ; // V -> U

    std::size_t num_p1() const { return p1_succ.size(); }
    std::size_t num_p2() const { return p2_succ.size(); }
};

enum class ObjectiveKind { Safe, Reach };

// goal is a subset of U. Safe(goal): every play stays within goal.
// Reach(goal): the play eventually enters goal.
struct WinningObjective {
    ObjectiveKind kind = ObjectiveKind::Safe;
    std::vector<bool> goal; // size = num_p1
};

// Positional P2 strategy: chosen beta-successor per P2 node.
struct PositionalStrategy {
    std::map<std::uint32_t, std::uint32_t> moves;
};

// Index-range sanity for arena and goal; throws input_error.
void check_arena(const GameArena& a);
void check_goal(const GameArena& a, const std::vector<bool>& goal);

// P2 strategy enforcing Safe(goal), or nullopt when P1 can force an unsafe
// U node. Counter-based backward BFS of the P1 attractor of the unsafe set;
// surviving P2 nodes move to the lowest-index successor outside it. If init
// itself is unsafe, the length-0 play already loses.
std::optional<PositionalStrategy> solve_safety(const GameArena& a, const std::vector<bool>& goal);

// P2 strategy enforcing Reach(goal), or nullopt. P2-attractor of goal;
// extracted moves strictly decrease attractor rank (ties: lowest index).
// If init is a goal node the win is immediate and the move map is empty.
std::optional<PositionalStrategy> solve_reachability(const GameArena& a,
                                                     const std::vector<bool>& goal);

// Independent check: restricts the arena to the strategy and inspects every
// reachable play. Safe: all reachable U nodes in goal, nothing deadlocked.
// Reach: after cutting goal nodes' exits, the reachable fragment is acyclic
// and every maximal path ends in goal. Throws input_error when the strategy
// references unknown nodes or non-beta edges.
bool verify_strategy(const GameArena& a, const WinningObjective& w, const PositionalStrategy& s);

std::string to_dot(const GameArena& a, const WinningObjective& w);

} // namespace mbsd::games

#endif
