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

// Deliberately naive reference deciders used by the test suite. They share
// no code with the reduction pipeline: the game oracle is a bounded min-max
// search, the MBSD oracle explores joint moves directly and evaluates the
// mapping formula on candidate stop prefixes with eval_trace.

#pragma once

#include "mbsd/games.hpp"
#include "mbsd/instance.hpp"

#include <cstddef>
#include <cstdint>

namespace mbsd::oracle {

enum class Winner : std::uint8_t { P1, P2 };

struct OracleVerdict {
    Winner winner = Winner::P1;
    std::size_t depth_used = 0;      // deepest ply actually explored
    std::size_t nodes_expanded = 0;
    bool bounded = false;            // depth bound below the exactness threshold
};

// Exhaustive alternating search from the initial node, one ply per edge.
// Safe: P1 wins iff it can force a goal-violating P1 node within the bound.
// Reach: P2 wins iff it can force a goal P1 node within the bound. Bounds of
// at least 2*(|U|+|V|) are exact by positional determinacy; smaller bounds
// yield a verdict marked `bounded`.
OracleVerdict minmax_decide(const games::GameArena& a, const games::WinningObjective& w,
                            std::size_t depth_bound);

// Direct search over the definition of MBSD realizability: agents alternate
// single moves, the stacked joint word is evaluated against the mapping
// formula at each candidate stop point. `horizon` bounds the number of joint
// steps; 0 picks 2*|S|*|T| for point-wise and 2*|S|*|T|*2k for target
// mappings (general mappings need an explicit horizon). Capped at
// |S|*|T| <= 200.
bool oracle_mbsd(const instance::MbsdInstance& p, std::size_t horizon = 0);

} // namespace mbsd::oracle
