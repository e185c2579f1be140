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

#include "mbsd/errors.hpp"
#include "mbsd/instance.hpp"

#include "test_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>

using namespace mbsd::instance;
using namespace mbsd::ltlf;
using mbsd::domains::DynamicDomain;
using mbsd::input_error;

namespace {

DynamicDomain tiny(const std::string& prop) {
    DynamicDomain d;
    d.props = {prop};
    d.ids = {"s0"};
    d.labels = {TraceLetter({prop})};
    d.init = 0;
    d.succ = {{0}};
    return d;
}

MbsdInstance pointwise_example() {
    MbsdInstance p;
    p.domain_a = tiny("a");
    p.domain_b = tiny("b");
    p.mapping.kind = MappingKind::PointWise;
    p.mapping.conjuncts.emplace_back(atom("a"), atom("b"));
    p.stop_agent = StopAgent::A;
    return p;
}

} // namespace

TEST_SUITE("instance") {

TEST_CASE("mapping_formula puts the conjunction together") {
    MappingSpec pw;
    pw.kind = MappingKind::PointWise;
    pw.conjuncts.emplace_back(atom("a"), atom("b"));
    CHECK(mapping_formula(pw) == parse("G (a -> b)"));
    pw.conjuncts.emplace_back(atom("c"), atom("d"));
    CHECK(mapping_formula(pw) == parse("G (a -> b) & G (c -> d)"));

    MappingSpec tg;
    tg.kind = MappingKind::Target;
    tg.conjuncts.emplace_back(atom("a"), atom("b"));
    CHECK(mapping_formula(tg) == parse("F a -> F b"));
    tg.conjuncts.emplace_back(atom("c"), atom("d"));
    CHECK(mapping_formula(tg) == parse("(F a -> F b) & (F c -> F d)"));

    MappingSpec gen;
    gen.kind = MappingKind::General;
    gen.formula = parse("G (a -> X b)");
    CHECK(mapping_formula(gen) == parse("G (a -> X b)"));
}

TEST_CASE("validation enforces the instance invariants") {
    CHECK_NOTHROW(validate_instance(pointwise_example()));

    SUBCASE("proposition sets must be disjoint") {
        MbsdInstance p = pointwise_example();
        p.domain_b = tiny("a");
        CHECK_THROWS_AS(validate_instance(p), input_error);
    }
    SUBCASE("pointwise pairs with stop agent A") {
        MbsdInstance p = pointwise_example();
        p.stop_agent = StopAgent::B;
        CHECK_THROWS_AS(validate_instance(p), input_error);
    }
    SUBCASE("target pairs with stop agent B") {
        MbsdInstance p = pointwise_example();
        p.mapping.kind = MappingKind::Target;
        p.stop_agent = StopAgent::A;
        CHECK_THROWS_AS(validate_instance(p), input_error);
    }
    SUBCASE("at least one conjunct") {
        MbsdInstance p = pointwise_example();
        p.mapping.conjuncts.clear();
        CHECK_THROWS_AS(validate_instance(p), input_error);
    }
    SUBCASE("conjunct sides are scoped to their agents") {
        MbsdInstance p = pointwise_example();
        p.mapping.conjuncts[0] = {atom("b"), atom("b")}; // phi over agent B props
        CHECK_THROWS_AS(validate_instance(p), input_error);
        p.mapping.conjuncts[0] = {atom("a"), atom("a")};
        CHECK_THROWS_AS(validate_instance(p), input_error);
    }
    SUBCASE("conjunct sides are temporal-free") {
        MbsdInstance p = pointwise_example();
        p.mapping.conjuncts[0] = {parse("F a"), atom("b")};
        CHECK_THROWS_AS(validate_instance(p), input_error);
    }
    SUBCASE("general formulas stay inside the joint propositions") {
        MbsdInstance p = pointwise_example();
        p.mapping.kind = MappingKind::General;
        p.mapping.conjuncts.clear();
        p.mapping.formula = parse("G (a -> z)");
        CHECK_THROWS_AS(validate_instance(p), input_error);
        p.mapping.formula = parse("G (a -> X b)");
        p.stop_agent = StopAgent::B;
        CHECK_NOTHROW(validate_instance(p));
    }
    SUBCASE("invalid domains are rejected") {
        MbsdInstance p = pointwise_example();
        p.domain_a.succ[0].clear();
        CHECK_THROWS_AS(validate_instance(p), input_error);
    }
}

TEST_CASE("JSON codec round-trips every kind") {
    testutil::rng_t rng(31);
    for (int i = 0; i < 10; ++i) {
        const MbsdInstance p = testutil::random_pointwise_instance(rng, 4, 3);
        const MbsdInstance q = decode_instance(encode_instance(p));
        CHECK(encode_instance(q) == encode_instance(p));
        CHECK(q.mapping.kind == MappingKind::PointWise);
        CHECK(q.stop_agent == StopAgent::A);
        CHECK(mapping_formula(q.mapping) == mapping_formula(p.mapping));
    }
    for (int i = 0; i < 10; ++i) {
        const MbsdInstance p = testutil::random_target_instance(rng, 4, 3, false);
        const MbsdInstance q = decode_instance(encode_instance(p));
        CHECK(encode_instance(q) == encode_instance(p));
        CHECK(q.mapping.kind == MappingKind::Target);
    }
    for (int i = 0; i < 10; ++i) {
        const MbsdInstance p = testutil::random_general_instance(rng, 4);
        const MbsdInstance q = decode_instance(encode_instance(p));
        CHECK(encode_instance(q) == encode_instance(p));
        CHECK(q.mapping.formula == p.mapping.formula);
    }
}

TEST_CASE("instance JSON schema errors") {
    nlohmann::json doc = encode_instance(pointwise_example());
    SUBCASE("unknown mapping kind") {
        doc["mapping"]["kind"] = "sideways";
        CHECK_THROWS_AS(decode_instance(doc), input_error);
    }
    SUBCASE("missing stop agent") {
        doc.erase("stop_agent");
        CHECK_THROWS_AS(decode_instance(doc), input_error);
    }
    SUBCASE("bad stop agent") {
        doc["stop_agent"] = "C";
        CHECK_THROWS_AS(decode_instance(doc), input_error);
    }
    SUBCASE("pointwise without conjuncts") {
        doc["mapping"].erase("conjuncts");
        CHECK_THROWS_AS(decode_instance(doc), input_error);
    }
    SUBCASE("general needs a formula") {
        doc["mapping"] = {{"kind", "general"}};
        CHECK_THROWS_AS(decode_instance(doc), input_error);
    }
    SUBCASE("formula strings must parse") {
        doc["mapping"]["conjuncts"][0]["phi"] = "a U";
        CHECK_THROWS_AS(decode_instance(doc), input_error);
    }
}

TEST_CASE("domains may live in separate files") {
    const MbsdInstance p = pointwise_example();
    const std::string dir = "instance_paths_tmp";
    std::filesystem::create_directories(dir);
    {
        std::ofstream fa(dir + "/da.json");
        fa << mbsd::domains::encode(p.domain_a);
        std::ofstream fb(dir + "/db.json");
        fb << mbsd::domains::encode(p.domain_b);
        nlohmann::json doc = encode_instance(p);
        doc["domain_a"] = "da.json"; // relative to the instance file
        doc["domain_b"] = "db.json";
        std::ofstream fi(dir + "/inst.json");
        fi << doc;
    }
    const MbsdInstance q = load_instance(dir + "/inst.json");
    CHECK(encode_instance(q) == encode_instance(p));

    CHECK_THROWS_AS(load_instance(dir + "/missing.json"), input_error);
    nlohmann::json doc = encode_instance(p);
    doc["domain_a"] = "nowhere.json";
    CHECK_THROWS_AS(decode_instance(doc, dir), input_error);
}

} // TEST_SUITE
