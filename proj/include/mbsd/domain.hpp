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

#ifndef MBSD_DOMAIN_HPP
#define MBSD_DOMAIN_HPP

#include "mbsd/ltlf.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mbsd::domains {

// Dynamic domain: finite serial labelled transition system. States carry a
// dense index; `ids` holds the user-facing names. Immutable once built.
struct DynamicDomain {
    std::vector<ltlf::Proposition> props; // sorted, unique
    std::vector<std::string> ids;         // dense index -> id
    std::vector<ltlf::TraceLetter> labels;
    std::uint32_t init = 0;
    std::vector<std::vector<std::uint32_t>> succ; // sorted, unique per state

    std::size_t num_states() const { return ids.size(); }
    // Dense index of a state id. Throws input_error on unknown ids.
    std::uint32_t state_index(const std::string& id) const;
    bool has_edge(std::uint32_t from, std::uint32_t to) const;
};

// All invariant violations, one message each (empty = valid): non-serial
// states, dangling transition endpoints, labels outside props, bad init.
std::vector<std::string> validation_errors(const DynamicDomain& d);
void validate(const DynamicDomain& d); // throws input_error listing every violation

bool is_trace(const DynamicDomain& d, const std::vector<std::uint32_t>& seq);
bool is_trace(const DynamicDomain& d, const std::vector<std::string>& seq);

// True iff removing all self-loops leaves a tree rooted at init (every state
// reachable, in-degree <= 1, init in-degree 0) and every self-loop state has
// the loop as its only outgoing transition.
bool is_tree_like(const DynamicDomain& d);

// JSON codec. decode validates the schema and the domain invariants; encode
// emits the canonical form (sorted label/prop arrays, transitions ordered by
// state index). decode(encode(d)) == d.
DynamicDomain decode(const nlohmann::json& doc);
nlohmann::json encode(const DynamicDomain& d);

/* ---------------- generators ---------------- */

// Random serial domain: `states` states with out-degree in [1, branching],
// `props` propositions with fair-coin labels. With tree_like set, the result
// satisfies is_tree_like (random tree, self-loops at the leaves).
// Deterministic per seed.
DynamicDomain gen_random(std::uint32_t states, std::uint32_t branching, std::uint32_t props,
                         bool tree_like, std::uint64_t seed);

struct GridCell {
    int x = 0;
    int y = 0;
    bool operator==(const GridCell& o) const { return x == o.x && y == o.y; }
    bool operator<(const GridCell& o) const { return x != o.x ? x < o.x : y < o.y; }
};

// Ghost-vs-Pac-Man benchmark: ghosts (domain A) move jointly one cell in the
// 4-neighborhood or stay, ignoring walls; Pac-Man (domain B) starts at (0,0),
// moves likewise but blocked by walls, eating candy on arrival. The mapping
// is one collision-avoidance conjunct per non-wall cell:
//   some-ghost-at-cell -> not Pac-Man-at-cell.
struct PacmanInstance {
    DynamicDomain ghosts;
    DynamicDomain pacman;
    std::vector<std::pair<ltlf::Formula, ltlf::Formula>> conjuncts;
};

// Reachable Pac-Man states are materialized by BFS; the pre-pruning estimate
// |cells| * 2^(|cells|-1) and the ghost count |grid|^ghosts are checked
// against `ceiling` first (cap_error beyond it).
PacmanInstance gen_pacman(int n, int ghosts, const std::vector<GridCell>& walls,
                          std::size_t ceiling = 1000000);

std::size_t pacman_state_estimate(int n, const std::vector<GridCell>& walls);

} // namespace mbsd::domains

#endif
