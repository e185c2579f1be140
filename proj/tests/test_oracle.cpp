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

#include "mbsd/automata.hpp"
#include "mbsd/errors.hpp"
#include "mbsd/oracle.hpp"
#include "mbsd/reductions.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace mbsd::oracle;
using namespace mbsd::ltlf;
using mbsd::cap_error;
using mbsd::input_error;
using mbsd::games::GameArena;
using mbsd::games::ObjectiveKind;
using mbsd::games::WinningObjective;
using mbsd::instance::MappingKind;
using mbsd::instance::MbsdInstance;
using mbsd::instance::StopAgent;

namespace {

MbsdInstance trivial_instance(bool a_holds, bool b_holds) {
    MbsdInstance p;
    p.domain_a.props = {"a"};
    p.domain_a.ids = {"s0"};
    p.domain_a.labels = {TraceLetter(a_holds ? std::vector<std::string>{"a"}
                                             : std::vector<std::string>{})};
    p.domain_a.init = 0;
    p.domain_a.succ = {{0}};
    p.domain_b = p.domain_a;
    p.domain_b.props = {"b"};
    p.domain_b.labels = {TraceLetter(b_holds ? std::vector<std::string>{"b"}
                                             : std::vector<std::string>{})};
    p.mapping.kind = MappingKind::PointWise;
    p.mapping.conjuncts.emplace_back(atom("a"), atom("b"));
    p.stop_agent = StopAgent::A;
    return p;
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("minmax on hand-built arenas") {
    SUBCASE("reach goal at the initial node costs zero plies") {
        GameArena a;
        a.init = 0;
        a.p1_succ = {{0}};
        a.p2_succ = {{0}};
        const auto v = minmax_decide(a, {ObjectiveKind::Reach, {true}}, 8);
        CHECK(v.winner == Winner::P2);
        CHECK(v.depth_used == 0);
        CHECK(v.nodes_expanded >= 1);
    }
    SUBCASE("safety forced exit in two plies") {
        // u0 -> v0 -> u1 only; u1 unsafe
        GameArena a;
        a.init = 0;
        a.p1_succ = {{0}, {0}};
        a.p2_succ = {{1}};
        const auto v = minmax_decide(a, {ObjectiveKind::Safe, {true, false}}, 8);
        CHECK(v.winner == Winner::P1);
        CHECK(v.depth_used >= 2);
    }
    SUBCASE("depth bounds below the exactness threshold are flagged") {
        GameArena a;
        a.init = 0;
        a.p1_succ = {{0}};
        a.p2_succ = {{0}};
        CHECK(minmax_decide(a, {ObjectiveKind::Safe, {true}}, 1).bounded);
        CHECK_FALSE(minmax_decide(a, {ObjectiveKind::Safe, {true}}, 4).bounded);
        CHECK_THROWS_AS(minmax_decide(a, {ObjectiveKind::Safe, {true}}, 0), input_error);
    }
    SUBCASE("a shallow bound can miss a P1 win") {
        // P1 needs 4 plies to force the trap; a 2-ply search says P2
        GameArena a;
        a.init = 0;
        a.p1_succ = {{0}, {1}, {0}};
        a.p2_succ = {{1}, {2}};
        const WinningObjective w{ObjectiveKind::Safe, {true, true, false}};
        CHECK(minmax_decide(a, w, 10).winner == Winner::P1);
        const auto shallow = minmax_decide(a, w, 2);
        CHECK(shallow.winner == Winner::P2);
        CHECK(shallow.bounded);
    }
}

TEST_CASE("minmax agrees with the attractor solvers") {
    testutil::rng_t rng(81);
    for (int i = 0; i < 120; ++i) {
        const bool reach = (i % 2) == 0;
        const auto rg = testutil::random_game(rng, 5, reach);
        const auto depth = 2 * (rg.arena.num_p1() + rg.arena.num_p2());
        const auto v = minmax_decide(rg.arena, rg.objective, depth);
        const bool solver_wins =
            (reach ? mbsd::games::solve_reachability(rg.arena, rg.objective.goal)
                   : mbsd::games::solve_safety(rg.arena, rg.objective.goal))
                .has_value();
        CHECK(solver_wins == (v.winner == Winner::P2));
    }
}

TEST_CASE("the MBSD oracle on trivial instances") {
    CHECK(oracle_mbsd(trivial_instance(true, true)));
    CHECK(oracle_mbsd(trivial_instance(false, false))); // premise never fires
    CHECK_FALSE(oracle_mbsd(trivial_instance(true, false)));

    SUBCASE("an unsatisfiable-premise target instance is realizable") {
        MbsdInstance p = trivial_instance(false, false);
        p.mapping.kind = MappingKind::Target;
        p.stop_agent = StopAgent::B;
        CHECK(oracle_mbsd(p));
    }
    SUBCASE("the state-pair cap") {
        MbsdInstance p = trivial_instance(true, true);
        p.domain_a = mbsd::domains::gen_random(15, 2, 0, false, 3);
        p.domain_b = mbsd::domains::gen_random(15, 2, 0, false, 4);
        p.mapping.kind = MappingKind::General;
        p.mapping.conjuncts.clear();
        p.mapping.formula = f_true();
        CHECK_THROWS_AS(oracle_mbsd(p, 4), cap_error);
    }
    SUBCASE("general mappings need an explicit horizon") {
        MbsdInstance p = trivial_instance(true, true);
        p.mapping.kind = MappingKind::General;
        p.mapping.conjuncts.clear();
        p.mapping.formula = f_true();
        CHECK_THROWS_AS(oracle_mbsd(p), input_error);
        CHECK(oracle_mbsd(p, 4));
    }
}

TEST_CASE("oracle and reduction pipeline agree") {
    testutil::rng_t rng(82);

    SUBCASE("pointwise instances") {
        for (int i = 0; i < 25; ++i) {
            const MbsdInstance p = testutil::random_pointwise_instance(rng, 4, 2);
            CHECK(mbsd::reductions::solve_mbsd(p).realizable == oracle_mbsd(p));
        }
    }
    SUBCASE("target instances") {
        for (int i = 0; i < 25; ++i) {
            const MbsdInstance p = testutil::random_target_instance(rng, 3, 2, false);
            CHECK(mbsd::reductions::solve_mbsd(p, mbsd::reductions::SolveMode::Target)
                      .realizable == oracle_mbsd(p));
        }
    }
    SUBCASE("general instances with an automaton-sized horizon") {
        // the exact horizon for a general mapping scales with the residual
        // automaton, which the test computes on the oracle's behalf
        auto exact_horizon = [](const MbsdInstance& p) {
            std::vector<Proposition> props = p.domain_a.props;
            props.insert(props.end(), p.domain_b.props.begin(), p.domain_b.props.end());
            const auto dfa =
                mbsd::automata::build_dfa(mbsd::instance::mapping_formula(p.mapping), props);
            return 2 * p.domain_a.num_states() * p.domain_b.num_states() * dfa.num_states();
        };

        // general-kind instances whose formulas keep the search tractable
        for (int i = 0; i < 12; ++i) {
            MbsdInstance p = testutil::random_pointwise_instance(rng, 3, 2);
            p.mapping.formula = mbsd::instance::mapping_formula(p.mapping);
            p.mapping.kind = MappingKind::General;
            p.mapping.conjuncts.clear();
            CHECK(mbsd::reductions::solve_mbsd(p).realizable ==
                  oracle_mbsd(p, exact_horizon(p)));
        }
        for (int i = 0; i < 12; ++i) {
            MbsdInstance p = testutil::random_target_instance(rng, 3, 2, false);
            p.mapping.formula = mbsd::instance::mapping_formula(p.mapping);
            p.mapping.kind = MappingKind::General;
            p.mapping.conjuncts.clear();
            CHECK(mbsd::reductions::solve_mbsd(p).realizable ==
                  oracle_mbsd(p, exact_horizon(p)));
        }

        // arbitrary formulas over deterministic chain domains: the single
        // joint path keeps the uncached search linear in the horizon
        for (int i = 0; i < 12; ++i) {
            MbsdInstance p;
            p.domain_a = testutil::renamed(
                mbsd::domains::gen_random(1 + testutil::draw(rng, 3), 1, 1, false, rng()), "a_");
            p.domain_b = testutil::renamed(
                mbsd::domains::gen_random(1 + testutil::draw(rng, 3), 1, 1, false, rng()), "b_");
            p.mapping.kind = MappingKind::General;
            std::vector<std::string> props = p.domain_a.props;
            props.insert(props.end(), p.domain_b.props.begin(), p.domain_b.props.end());
            p.mapping.formula = testutil::random_formula(rng, props, 2);
            p.stop_agent = testutil::draw(rng, 2) == 0 ? StopAgent::A : StopAgent::B;
            mbsd::instance::validate_instance(p);
            CHECK(mbsd::reductions::solve_mbsd(p).realizable ==
                  oracle_mbsd(p, exact_horizon(p)));
        }
    }
}

TEST_CASE("the oracle sources stay independent of the pipeline") {
    // the reference decider may not borrow the automaton or reduction code
    const char* src_dir = std::getenv("MBSD_SOURCE_DIR");
    REQUIRE(src_dir != nullptr);
    for (const std::string rel : {"/src/oracle.cpp", "/include/mbsd/oracle.hpp"}) {
        std::ifstream in(src_dir + rel);
        REQUIRE(in.good());
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        CHECK(text.find("mbsd/reductions.hpp") == std::string::npos);
        CHECK(text.find("mbsd/automata.hpp") == std::string::npos);
    }
}

} // TEST_SUITE
