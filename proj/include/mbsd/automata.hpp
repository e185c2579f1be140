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

#ifndef MBSD_AUTOMATA_HPP
#define MBSD_AUTOMATA_HPP

#include "mbsd/ltlf.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mbsd::automata {

// Deterministic finite automaton over the powerset alphabet of `props`.
// Letters are indexed by bitmask: bit i set means props[i] is in the letter.
// trans[q] has exactly 2^|props| entries. Immutable once built.
struct Dfa {
    std::vector<ltlf::Proposition> props; // sorted
    std::uint32_t init = 0;
    std::vector<std::vector<std::uint32_t>> trans;
    std::vector<bool> accepting;

    std::size_t num_states() const { return trans.size(); }
    std::size_t num_letters() const { return std::size_t(1) << props.size(); }
};

struct DfaCaps {
    std::size_t max_props = 12;    // explicit alphabet enumeration cap
    std::size_t max_states = 65536; // hard ceiling for the residual BFS
};

// Canonical form of a negation-normal-form residual: constants folded,
// double negations removed, and/or chains flattened, sorted, deduplicated,
// absorbed. Canonical forms are not logically complete; minimize() cleans up
// what canonicalization leaves apart. Idempotent.
ltlf::Formula canonical(ltlf::Formula f);

// One-letter progression of a canonical residual. Strong next strips to
// (arg AND ALIVE), weak next to (arg OR DEAD); ALIVE progresses to true and
// DEAD to false, which makes the end-of-word test below reject leftover
// strong-next obligations. Output is canonical.
ltlf::Formula progress(ltlf::Formula r, const ltlf::TraceLetter& a);

// Whether a word may stop in this residual: true/DEAD/weak obligations
// accept, literals and strong obligations do not.
bool end_accepting(ltlf::Formula r);

// Explicit DFA via BFS over canonical residuals of canonical(nnf(f)).
// `props` must cover propositions(f); it fixes the alphabet (extra
// propositions enlarge it). Throws cap_error past the caps. Not minimized.
Dfa build_dfa(ltlf::Formula f, std::vector<ltlf::Proposition> props, const DfaCaps& caps = {});

// Language-equivalent minimal DFA: unreachable states dropped, then Hopcroft
// partition refinement; states renumbered by BFS discovery from the initial
// class so the result is canonical.
Dfa minimize(const Dfa& d);

// Run the word through the DFA; accept iff the state after the last letter
// is accepting. Throws input_error on empty words or unknown propositions.
bool accepts(const Dfa& d, const ltlf::Trace& w);

std::uint32_t letter_mask(const Dfa& d, const ltlf::TraceLetter& a);
ltlf::TraceLetter mask_letter(const Dfa& d, std::uint32_t mask);

std::string to_dot(const Dfa& d);
std::string to_json(const Dfa& d); // {"props","states","init","accepting","transitions"}

} // namespace mbsd::automata

#endif
