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

// Quantified Boolean formulas in prenex CNF: a QDIMACS-subset parser, a
// brute-force evaluator used as a ground-truth oracle, the transform into
// CNF-1 form (at most one universal literal per clause, strictly alternating
// forall/exists prefix), and the encoding of CNF-1 instances as MBSD
// synthesis problems over two DAG gadget domains.

#pragma once

#include "mbsd/instance.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mbsd::qbf {

struct QbfCnf {
    // (is_forall, variable), in quantification order; variables are 1-based
    // DIMACS numbers and every clause variable must appear here exactly once.
    std::vector<std::pair<bool, std::uint32_t>> prefix;
    // DIMACS literals: +v / -v.
    std::vector<std::vector<std::int32_t>> clauses;
    std::uint32_t num_vars = 0;
};

// CNF-1 form is a plain QbfCnf satisfying is_cnf1.
using QbfCnf1 = QbfCnf;

// Parse the QDIMACS subset: optional `c` comments, a `p cnf <vars> <clauses>`
// header, `a`/`e` quantifier lines, then one 0-terminated clause per line.
// Rejects free variables, duplicate quantification, variables out of range
// and clause-count mismatches.
QbfCnf parse_qdimacs(const std::string& text);

// Exhaustive min-max evaluation in prefix order (forall = both branches must
// hold, exists = one must). Capped at 22 quantified variables.
bool eval_qbf(const QbfCnf& q);

// True iff the prefix strictly alternates forall/exists starting with a
// forall (so universal and existential counts are equal) and every clause
// contains at most one universal literal.
bool is_cnf1(const QbfCnf& q);

// Rewrite an arbitrary QbfCnf into an equivalent CNF-1 formula: each
// universal x gets a fresh existential shadow z placed right after it, linked
// by the clauses (x | -z) and (-x | z); original occurrences of x switch to
// z; dummy universals pad the prefix back to strict alternation.
QbfCnf1 cnf_to_cnf1(const QbfCnf& q);

// Encode a CNF-1 formula as an MBSD target instance over two diamond-chain
// domains: agent H walks major states m1..m{n+1}, choosing between a state
// labeled pH_it (variable i set true) and one labeled pH_if, and finally
// reaches the pH_star self-loop. One target conjunct per clause plus the
// stopping conjunct (pA_star, pB_star); the instance is realizable iff the
// formula is true. Stop agent is B.
instance::MbsdInstance qbf1_to_mbsd(const QbfCnf1& q);

} // namespace mbsd::qbf
