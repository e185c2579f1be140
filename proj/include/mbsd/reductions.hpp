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

#ifndef MBSD_REDUCTIONS_HPP
#define MBSD_REDUCTIONS_HPP

#include "mbsd/games.hpp"
#include "mbsd/instance.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mbsd::reductions {

struct ReductionCaps {
    std::uint32_t k_cap = 12;          // memory-bit conjunct cap (4^k blow-up)
    std::size_t node_budget = 2000000; // arena nodes (P1 + P2) during any build
};

enum class StrategyKind { Pointwise, Target, Tree, General };

// Game arena annotated with what each node means: (s, t) plus the memory
// vector (target) or the interned automaton residual (general). U and V
// share the annotation type; mem packs the bits c1 d1 c2 d2 ... from bit 0.
struct AnnotatedArena {
    struct Node {
        std::uint32_t s = 0;
        std::uint32_t t = 0;
        std::uint64_t mem = 0;
        std::uint32_t q = 0;
    };
    games::GameArena arena;
    games::WinningObjective objective;
    std::vector<Node> u_nodes, v_nodes;
    StrategyKind kind = StrategyKind::Pointwise;
    std::uint32_t k = 0;                  // conjunct count (pointwise/target/tree)
    std::vector<ltlf::Formula> residuals; // general: interned canonical residuals
};

// Full product (exactly 2*|S|*|T| nodes), objective Safe over the joint
// per-letter check of every conjunct. Requires PointWise / stop A.
AnnotatedArena build_pointwise_game(const instance::MbsdInstance& p,
                                    const ReductionCaps& caps = {});

// Product extended with 2k monotone bits (c_i: phi_i seen on A's trace,
// d_i: psi_i seen on B's), objective Reach of "every c_i implies d_i".
// Reachable fragment only. Requires Target / stop B; k above the cap is
// refused with the 4^k estimate.
AnnotatedArena build_target_game(const instance::MbsdInstance& p, const ReductionCaps& caps = {});

// Tree-like fast path: plain product without memory bits; per-state flags
// "phi_i satisfied somewhere on the unique path to s" replace the bits.
// Requires Target / stop B and both domains tree-like.
AnnotatedArena build_tree_arena(const instance::MbsdInstance& p, const ReductionCaps& caps = {});

// Product with lazily progressed automaton residuals; the initial joint
// label is pre-consumed, then B's moves advance the residual on the joint
// label of (current s, chosen t'). Safe when stop A, Reach when stop B.
AnnotatedArena build_general_game(const instance::MbsdInstance& p, const ReductionCaps& caps = {});

// Executable strategy: positional core keyed by annotated P2 node
// ("s|t", "s|t|<bits>", or "s|t|<residual index>"), mapping to the chosen
// D_B state id. The annotated arena is re-derived deterministically from the
// instance whenever the strategy is loaded, so histories never need storing.
struct MbsdStrategy {
    StrategyKind kind = StrategyKind::Pointwise;
    std::uint32_t k = 0;
    bool stop_on_goal = false; // set iff stop agent is B
    std::map<std::string, std::string> moves;
};

std::string node_key(const AnnotatedArena& g, std::uint32_t v_index,
                     const instance::MbsdInstance& p);

MbsdStrategy lift_strategy(const instance::MbsdInstance& p, const games::PositionalStrategy& s,
                           const AnnotatedArena& g);

nlohmann::json encode_strategy(const MbsdStrategy& s);
MbsdStrategy decode_strategy(const nlohmann::json& doc);

enum class SolveMode { Auto, Pointwise, Target, Tree, General };

struct SolveStats {
    std::size_t arena_nodes = 0;
    std::size_t arena_edges = 0;
    std::size_t dfa_states = 0; // interned residuals (general mode only)
    long long elapsed_ms = 0;
    std::string mode_used;
};

struct SolveResult {
    bool realizable = false;
    std::optional<MbsdStrategy> strategy;
    SolveStats stats;
};

// Dispatches to the reduction selected by `mode` (Auto: the mapping kind's
// own reduction, with the tree fast path when both domains are tree-like)
// and extracts a certified strategy on realizable instances.
SolveResult solve_mbsd(const instance::MbsdInstance& p, SolveMode mode = SolveMode::Auto,
                       const ReductionCaps& caps = {});

// Steps an MbsdStrategy against adversary moves of agent A. Rebuilds the
// annotated arena for the strategy's kind and walks it; the stop rule (when
// stop agent is B) fires on entering a goal node.
class StrategyRunner {
  public:
    StrategyRunner(const instance::MbsdInstance& p, const MbsdStrategy& s,
                   const ReductionCaps& caps = {});

    std::uint32_t current_a() const;
    std::uint32_t current_b() const;
    bool stopped() const { return stopped_; }

    // Advance A to `a_state` (must be a delta^A successor; input_error
    // otherwise) and return the strategy's D_B response.
    std::uint32_t step(std::uint32_t a_state);

  private:
    const instance::MbsdInstance& p_;
    AnnotatedArena g_;
    std::map<std::string, std::uint32_t> move_by_key_; // key -> resolved U node
    std::uint32_t at_;                                 // current U node
    bool stop_on_goal_;
    bool stopped_ = false;
};

// History-based form of the strategy (the sigma of the problem statement):
// the D_B state prescribed after A has walked `history` (which must be a
// rooted D_A trace; history [s0] yields t0).
std::uint32_t respond(const instance::MbsdInstance& p, const MbsdStrategy& s,
                      const std::vector<std::uint32_t>& history);

struct JointTrace {
    std::vector<std::uint32_t> a_states;
    std::vector<std::uint32_t> b_states; // same length
    ltlf::Trace word(const instance::MbsdInstance& p) const;
};

struct Adversary {
    bool scripted = false;
    std::vector<std::string> script; // D_A state ids, in order
    std::uint64_t seed = 0;          // random walk otherwise
};

struct SimResult {
    JointTrace trace;
    bool stopped = false;   // stop rule fired (stop agent B)
    bool satisfied = false; // eval of the mapping formula on the joint word
};

SimResult simulate(const instance::MbsdInstance& p, const MbsdStrategy& s,
                   const Adversary& adv, std::size_t max_steps,
                   const ReductionCaps& caps = {});

// Exhaustive independent check of the strategy on the rebuilt annotated
// arena (all adversary behaviors). `budget` caps the rebuilt arena size;
// exceeding it raises cap_error rather than answering false.
bool verify_mbsd(const instance::MbsdInstance& p, const MbsdStrategy& s,
                 std::size_t budget = 2000000);

} // namespace mbsd::reductions

#endif
