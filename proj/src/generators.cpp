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

#include "mbsd/domain.hpp"
#include "mbsd/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

namespace mbsd::domains {

namespace {

// mt19937 output is pinned by the standard; std::uniform_int_distribution is
// not, so draw bounded values by modulo to keep generators reproducible
// across standard libraries.
std::uint32_t draw(std::mt19937& rng, std::uint32_t n) { return rng() % n; }

std::string padded_id(std::size_t i, std::size_t count) {
    std::size_t width = 1;
    for (std::size_t c = count > 0 ? count - 1 : 0; c >= 10; c /= 10) ++width;
    std::string digits = std::to_string(i);
    return "s" + std::string(width - digits.size(), '0') + digits;
}

} // namespace

DynamicDomain gen_random(std::uint32_t states, std::uint32_t branching, std::uint32_t props,
                         bool tree_like, std::uint64_t seed) {
    if (states < 1 || branching < 1)
        throw input_error("gen_random: states and branching must be at least 1");
    std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));

    DynamicDomain d;
    for (std::uint32_t p = 0; p < props; ++p) d.props.push_back("p" + std::to_string(p));
    std::sort(d.props.begin(), d.props.end());
    for (std::uint32_t s = 0; s < states; ++s) d.ids.push_back(padded_id(s, states));
    d.init = 0;
    d.succ.resize(states);

    for (std::uint32_t s = 0; s < states; ++s) {
        std::vector<ltlf::Proposition> label;
        for (const auto& p : d.props)
            if (rng() & 1u) label.push_back(p);
        d.labels.emplace_back(std::move(label));
    }

    if (tree_like) {
        for (std::uint32_t s = 1; s < states; ++s) {
            std::vector<std::uint32_t> eligible;
            for (std::uint32_t j = 0; j < s; ++j)
                if (d.succ[j].size() < branching) eligible.push_back(j);
            std::uint32_t parent = eligible[draw(rng, static_cast<std::uint32_t>(eligible.size()))];
            d.succ[parent].push_back(s);
        }
        for (std::uint32_t s = 0; s < states; ++s)
            if (d.succ[s].empty()) d.succ[s].push_back(s); // leaves idle forever
    } else {
        for (std::uint32_t s = 0; s < states; ++s) {
            std::uint32_t deg = 1 + draw(rng, branching);
            std::set<std::uint32_t> targets;
            for (std::uint32_t i = 0; i < deg; ++i) targets.insert(draw(rng, states));
            d.succ[s].assign(targets.begin(), targets.end());
        }
    }
    for (auto& row : d.succ) std::sort(row.begin(), row.end());
    validate(d);
    return d;
}

/* ---------------- Pac-Man benchmark ---------------- */

namespace {

const char* const kGhostNames[] = {"bk", "pk", "ik", "cl"};

std::string cell_prop(const std::string& prefix, const GridCell& c) {
    return prefix + "_" + std::to_string(c.x) + "_" + std::to_string(c.y);
}

// current cell plus 4-neighbors, restricted to the grid, sorted by (x, y)
std::vector<GridCell> moves_from(const GridCell& c, int n) {
    std::vector<GridCell> out;
    const int dx[] = {0, 0, 0, -1, 1};
    const int dy[] = {0, -1, 1, 0, 0};
    for (int i = 0; i < 5; ++i) {
        GridCell m{c.x + dx[i], c.y + dy[i]};
        if (m.x >= 0 && m.x < n && m.y >= 0 && m.y < n) out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::size_t pacman_state_estimate(int n, const std::vector<GridCell>& walls) {
    std::set<GridCell> wallset(walls.begin(), walls.end());
    std::size_t cells = 0;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (!wallset.count(GridCell{x, y})) ++cells;
    if (cells == 0) return 0;
    if (cells - 1 >= 8 * sizeof(std::size_t)) return SIZE_MAX;
    return cells * (std::size_t(1) << (cells - 1));
}

PacmanInstance gen_pacman(int n, int ghosts, const std::vector<GridCell>& walls,
                          std::size_t ceiling) {
    if (n < 2) throw input_error("gen_pacman: grid size must be at least 2");
    if (ghosts < 1 || ghosts > 4) throw input_error("gen_pacman: ghost count must be in 1..4");
    std::set<GridCell> wallset;
    for (const auto& w : walls) {
        if (w.x < 0 || w.x >= n || w.y < 0 || w.y >= n)
            throw input_error("gen_pacman: wall outside the grid");
        wallset.insert(w);
    }
    if (wallset.count(GridCell{0, 0})) throw input_error("gen_pacman: cell (0,0) is a wall");

    std::vector<GridCell> cells; // non-wall cells, sorted
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (!wallset.count(GridCell{x, y})) cells.push_back(GridCell{x, y});
    std::sort(cells.begin(), cells.end());

    const std::size_t estimate = pacman_state_estimate(n, walls);
    if (estimate > ceiling)
        throw cap_error("gen_pacman: Pac-Man state estimate " + std::to_string(estimate) +
                        " exceeds the ceiling " + std::to_string(ceiling));
    std::size_t ghost_estimate = 1;
    for (int g = 0; g < ghosts; ++g) {
        if (ghost_estimate > ceiling / static_cast<std::size_t>(n * n))
            throw cap_error("gen_pacman: ghost state estimate exceeds the ceiling");
        ghost_estimate *= static_cast<std::size_t>(n * n);
    }

    PacmanInstance out;

    /* Pac-Man: position x remaining candy, reachable fragment only. */
    {
        DynamicDomain& d = out.pacman;
        std::map<GridCell, std::size_t> candy_bit; // candy cells = non-wall cells minus (0,0)
        std::vector<GridCell> candy_cells;
        for (const auto& c : cells)
            if (!(c == GridCell{0, 0})) {
                candy_bit[c] = candy_cells.size();
                candy_cells.push_back(c);
            }
        for (const auto& c : cells) d.props.push_back(cell_prop("p", c));
        for (const auto& c : candy_cells) d.props.push_back(cell_prop("c", c));
        std::sort(d.props.begin(), d.props.end());

        using PState = std::pair<GridCell, std::uint64_t>; // position, candy mask
        std::map<PState, std::uint32_t> index;
        std::vector<PState> list;
        std::deque<std::uint32_t> queue;
        auto intern = [&](const PState& ps) {
            auto it = index.find(ps);
            if (it != index.end()) return it->second;
            auto id = static_cast<std::uint32_t>(list.size());
            index.emplace(ps, id);
            list.push_back(ps);
            queue.push_back(id);
            return id;
        };
        const std::uint64_t full = candy_cells.empty()
                                       ? 0
                                       : (std::uint64_t(1) << candy_cells.size()) - 1;
        intern(PState{GridCell{0, 0}, full});
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            if (d.succ.size() <= s) d.succ.resize(s + 1);
            PState ps = list[s];
            for (const auto& m : moves_from(ps.first, n)) {
                if (wallset.count(m)) continue; // walls block Pac-Man
                std::uint64_t candy = ps.second;
                auto cb = candy_bit.find(m);
                if (cb != candy_bit.end()) candy &= ~(std::uint64_t(1) << cb->second);
                d.succ[s].push_back(intern(PState{m, candy}));
            }
        }
        for (std::size_t s = 0; s < list.size(); ++s) {
            d.ids.push_back(padded_id(s, list.size()));
            std::vector<ltlf::Proposition> label{cell_prop("p", list[s].first)};
            for (std::size_t b = 0; b < candy_cells.size(); ++b)
                if (list[s].second & (std::uint64_t(1) << b))
                    label.push_back(cell_prop("c", candy_cells[b]));
            d.labels.emplace_back(std::move(label));
        }
        for (auto& row : d.succ) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
        }
        d.init = 0;
        validate(d);
    }

    /* Ghosts: joint positions, anywhere on the grid (walls ignored). */
    {
        DynamicDomain& d = out.ghosts;
        std::vector<GridCell> grid;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) grid.push_back(GridCell{x, y});
        for (int g = 0; g < ghosts; ++g)
            for (const auto& c : grid) d.props.push_back(cell_prop(kGhostNames[g], c));
        std::sort(d.props.begin(), d.props.end());

        using GState = std::vector<GridCell>;
        std::map<GState, std::uint32_t> index;
        std::vector<GState> list;
        std::deque<std::uint32_t> queue;
        auto intern = [&](const GState& gs) {
            auto it = index.find(gs);
            if (it != index.end()) return it->second;
            auto id = static_cast<std::uint32_t>(list.size());
            index.emplace(gs, id);
            list.push_back(gs);
            queue.push_back(id);
            return id;
        };
        intern(GState(static_cast<std::size_t>(ghosts), GridCell{n / 2, n / 2}));
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop_front();
            if (d.succ.size() <= s) d.succ.resize(s + 1);
            GState gs = list[s];
            // all joint moves: cartesian product of per-ghost moves
            std::vector<std::vector<GridCell>> opts;
            for (const auto& c : gs) opts.push_back(moves_from(c, n));
            std::vector<std::size_t> pick(opts.size(), 0);
            while (true) {
                GState next;
                for (std::size_t g = 0; g < opts.size(); ++g) next.push_back(opts[g][pick[g]]);
                d.succ[s].push_back(intern(next));
                std::size_t g = 0;
                while (g < pick.size() && ++pick[g] == opts[g].size()) pick[g++] = 0;
                if (g == pick.size()) break;
            }
        }
        for (std::size_t s = 0; s < list.size(); ++s) {
            d.ids.push_back(padded_id(s, list.size()));
            std::vector<ltlf::Proposition> label;
            for (std::size_t g = 0; g < list[s].size(); ++g)
                label.push_back(cell_prop(kGhostNames[g], list[s][g]));
            d.labels.emplace_back(std::move(label));
        }
        for (auto& row : d.succ) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
        }
        d.init = 0;
        validate(d);
    }

    /* Collision avoidance, one conjunct per non-wall cell. */
    for (const auto& c : cells) {
        ltlf::Formula any_ghost = ltlf::atom(cell_prop(kGhostNames[0], c));
        for (int g = 1; g < ghosts; ++g)
            any_ghost = ltlf::mk_or(any_ghost, ltlf::atom(cell_prop(kGhostNames[g], c)));
        out.conjuncts.emplace_back(any_ghost, ltlf::mk_not(ltlf::atom(cell_prop("p", c))));
    }
    return out;
}

} // namespace mbsd::domains
