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
#include "mbsd/ltlf.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <string>

using namespace mbsd::automata;
using namespace mbsd::ltlf;
using mbsd::cap_error;
using mbsd::input_error;

namespace {

TraceLetter letter(std::vector<std::string> ps) { return TraceLetter(std::move(ps)); }

// language equality probed on every word up to max_len
void check_same_language(const Dfa& a, const Dfa& b, const std::vector<Proposition>& props,
                         int max_len) {
    testutil::for_all_words(testutil::all_letters(props), max_len, [&](const Trace& w) {
        CHECK(accepts(a, w) == accepts(b, w));
    });
}

// Random depth-4 formulas occasionally exceed any fixed residual cap, so the
// fuzz sweeps redraw until one compiles under a modest cap.
Formula draw_buildable(testutil::rng_t& rng, const std::vector<Proposition>& props, Dfa& out) {
    DfaCaps caps;
    caps.max_states = 512;
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Formula f = testutil::random_formula(rng, props, 4);
        try {
            out = build_dfa(f, props, caps);
            return f;
        } catch (const cap_error&) {
        }
    }
    FAIL("no buildable formula in 64 draws");
    return f_true();
}

} // namespace

TEST_SUITE("automata") {

TEST_CASE("single-letter progression") {
    const Formula fp = canonical(to_nnf(parse("F p")));
    CHECK(progress(fp, letter({"p"})) == f_true());
    CHECK(progress(fp, letter({})) == fp);

    const Formula gp = canonical(to_nnf(parse("G p")));
    CHECK(progress(gp, letter({})) == f_false());

    // strong next defers the obligation one letter
    const Formula xp = canonical(to_nnf(parse("X p")));
    const Formula after = progress(xp, letter({}));
    CHECK(end_accepting(after) == false);
    CHECK(progress(after, letter({"p"})) == f_true());
    CHECK(progress(after, letter({})) == f_false());
}

TEST_CASE("end-of-word acceptance of residuals") {
    CHECK(end_accepting(f_true()));
    CHECK_FALSE(end_accepting(f_false()));
    CHECK_FALSE(end_accepting(canonical(to_nnf(parse("F p")))));
    CHECK_FALSE(end_accepting(atom("p")));
    // a Globally residual may stop once its body holds now and ever after
    const Formula gp = canonical(to_nnf(parse("G p")));
    CHECK(end_accepting(progress(gp, letter({"p"}))) ==
          eval_trace(parse("G p"), {letter({"p"})}, 0));
}

TEST_CASE("canonicalization is idempotent and folds boolean structure") {
    CHECK(canonical(mk_and(atom("a"), f_true())) == atom("a"));
    CHECK(canonical(mk_or(atom("a"), f_true())) == f_true());
    CHECK(canonical(mk_and(atom("a"), mk_not(atom("a")))) == f_false());
    CHECK(canonical(mk_or(mk_and(atom("a"), atom("b")), atom("a"))) == atom("a"));
    CHECK(canonical(mk_and(atom("b"), atom("a"))) == canonical(mk_and(atom("a"), atom("b"))));

    testutil::rng_t rng(5);
    for (int i = 0; i < 200; ++i) {
        const Formula f = canonical(to_nnf(testutil::random_formula(rng, {"a", "b"}, 4)));
        CHECK(canonical(f) == f);
    }
}

TEST_CASE("small languages come out right") {
    const std::vector<Proposition> p{"p"};

    SUBCASE("F p") {
        const Dfa d = minimize(build_dfa(parse("F p"), p));
        CHECK(d.num_states() == 2);
        CHECK(accepts(d, {letter({"p"})}));
        CHECK(accepts(d, {letter({}), letter({"p"})}));
        CHECK(accepts(d, {letter({"p"}), letter({})}));
        CHECK_FALSE(accepts(d, {letter({})}));
        CHECK_FALSE(accepts(d, {letter({}), letter({})}));
    }

    SUBCASE("true") {
        const Dfa d = minimize(build_dfa(f_true(), p));
        CHECK(d.num_states() == 1);
        CHECK(accepts(d, {letter({})}));
        CHECK(accepts(d, {letter({"p"}), letter({})}));
    }

    SUBCASE("X true accepts exactly the words of length two or more") {
        const Dfa d = minimize(build_dfa(parse("X true"), p));
        testutil::for_all_words(testutil::all_letters(p), 4, [&](const Trace& w) {
            CHECK(accepts(d, w) == (w.size() >= 2));
        });
    }

    SUBCASE("G p") {
        const Dfa d = minimize(build_dfa(parse("G p"), p));
        CHECK(accepts(d, {letter({"p"}), letter({"p"})}));
        CHECK_FALSE(accepts(d, {letter({"p"}), letter({})}));
    }
}

TEST_CASE("the automaton agrees with direct evaluation") {
    testutil::rng_t rng(99);
    const std::vector<Proposition> props{"p", "q"};
    const auto letters = testutil::all_letters(props);
    for (int i = 0; i < 120; ++i) {
        Dfa d;
        const Formula f = draw_buildable(rng, props, d);
        testutil::for_all_words(letters, 4, [&](const Trace& w) {
            CHECK(accepts(d, w) == eval_trace(f, w, 0));
        });
    }
}

TEST_CASE("minimization preserves the language and is idempotent") {
    testutil::rng_t rng(41);
    const std::vector<Proposition> props{"p", "q"};
    for (int i = 0; i < 60; ++i) {
        Dfa d;
        draw_buildable(rng, props, d);
        const Dfa m = minimize(d);
        CHECK(m.num_states() <= d.num_states());
        check_same_language(d, m, props, 4);
        const Dfa mm = minimize(m);
        CHECK(mm.num_states() == m.num_states());
        // canonical renumbering: minimizing twice is the identity
        CHECK(mm.trans == m.trans);
        CHECK(mm.accepting == m.accepting);
        CHECK(mm.init == m.init);
    }
}

TEST_CASE("minimization merges bisimilar states") {
    // (F p) | (F p) builds the same residual twice; p & !p collapses to the
    // sink. A two-sink DFA built by hand must shrink to one sink.
    Dfa d;
    d.props = {"p"};
    d.init = 0;
    d.trans = {{1, 2}, {1, 1}, {2, 2}};
    d.accepting = {false, false, false};
    const Dfa m = minimize(d);
    CHECK(m.num_states() == 1);
    CHECK_FALSE(m.accepting[0]);
}

TEST_CASE("the alphabet always covers the formula") {
    // missing formula propositions are folded into the alphabet
    const Dfa d0 = build_dfa(parse("F p"), {"q"});
    CHECK(d0.props == std::vector<Proposition>{"p", "q"});
    const Dfa d = build_dfa(parse("F p"), {"p", "q"});
    CHECK(d.num_letters() == 4);
    CHECK(accepts(d, {letter({"q"}), letter({"p"})}));
}

TEST_CASE("caps are enforced") {
    std::vector<Proposition> many;
    for (int i = 0; i < 13; ++i) many.push_back("p" + std::to_string(i));
    CHECK_THROWS_AS(build_dfa(f_true(), many), cap_error);

    DfaCaps tight;
    tight.max_states = 2;
    // X X X p needs more than two residuals
    CHECK_THROWS_AS(build_dfa(parse("X X X p"), {"p"}, tight), cap_error);
}

TEST_CASE("accepts validates its inputs") {
    const Dfa d = build_dfa(parse("F p"), {"p"});
    CHECK_THROWS_AS(accepts(d, {}), input_error);
    CHECK_THROWS_AS(accepts(d, {letter({"z"})}), input_error);
}

TEST_CASE("letter indexing round-trips") {
    const Dfa d = build_dfa(f_true(), {"a", "b"});
    for (std::uint32_t m = 0; m < 4; ++m) CHECK(letter_mask(d, mask_letter(d, m)) == m);
    CHECK(letter_mask(d, letter({"a"})) == 1);
    CHECK(letter_mask(d, letter({"b"})) == 2);
}

TEST_CASE("serialization is deterministic") {
    const Formula f = parse("G (a -> F b)");
    const Dfa d = minimize(build_dfa(f, {"a", "b"}));
    CHECK(to_dot(d) == to_dot(d));
    CHECK(to_json(d) == to_json(d));
    CHECK(to_dot(d).rfind("digraph", 0) == 0);
    CHECK(to_json(d).find("\"props\"") != std::string::npos);

    const Dfa d2 = minimize(build_dfa(parse("G (a -> F b)"), {"a", "b"}));
    CHECK(to_json(d) == to_json(d2));
}

} // TEST_SUITE
