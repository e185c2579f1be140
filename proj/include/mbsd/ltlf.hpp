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

#ifndef MBSD_LTLF_HPP
#define MBSD_LTLF_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace mbsd::ltlf {

using Proposition = std::string;

bool is_valid_proposition(const std::string& name);

// One position of a finite trace: the set of propositions true there.
// Kept sorted and duplicate-free.
class TraceLetter {
  public:
    TraceLetter() = default;
    explicit TraceLetter(std::vector<Proposition> props);

    bool contains(const Proposition& p) const;
    const std::vector<Proposition>& props() const { return props_; }
    std::size_t size() const { return props_.size(); }

    static TraceLetter unite(const TraceLetter& a, const TraceLetter& b);

    bool operator==(const TraceLetter& o) const { return props_ == o.props_; }
    bool operator<(const TraceLetter& o) const { return props_ < o.props_; }

  private:
    std::vector<Proposition> props_;
};

// Nonempty finite word over trace letters. Emptiness is rejected by the
// evaluation entry points rather than by the type itself.
using Trace = std::vector<TraceLetter>;

enum class Op : std::uint8_t {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    WeakNext,   // internal: produced by negation normal form only
    Until,
    Release,    // internal: produced by negation normal form only
    Eventually,
    Globally,
    EndAlive,   // internal end-marker used by automaton residuals
    EndDead,    // internal end-marker used by automaton residuals
};

// Formulas are hash-consed: every structurally distinct formula is built
// exactly once, so structural equality is pointer equality and formulas are
// cheap to copy, hash and compare. The intern table lives for the process.
struct FormulaNode {
    Op op;
    const FormulaNode* lhs; // nullptr for leaves
    const FormulaNode* rhs; // nullptr unless binary
    std::string name;       // atom name, empty otherwise
    std::uint64_t hash;
    std::uint32_t id;       // creation order, process-local
};

class Formula {
  public:
    Formula() : node_(nullptr) {}
    explicit Formula(const FormulaNode* n) : node_(n) {}

    bool valid() const { return node_ != nullptr; }
    Op op() const { return node_->op; }
    Formula lhs() const { return Formula(node_->lhs); }
    Formula rhs() const { return Formula(node_->rhs); }
    const std::string& atom_name() const { return node_->name; }
    const FormulaNode* raw() const { return node_; }
    std::uint64_t hash() const { return node_->hash; }

    bool operator==(const Formula& o) const { return node_ == o.node_; }
    bool operator!=(const Formula& o) const { return node_ != o.node_; }

  private:
    const FormulaNode* node_;
};

// Total order on formulas that depends only on structure (never on creation
// order), so canonical forms are reproducible across processes.
int compare(const Formula& a, const Formula& b);
struct FormulaLess {
    bool operator()(const Formula& a, const Formula& b) const {
        return compare(a, b) < 0;
    }
};
struct FormulaHash {
    std::size_t operator()(const Formula& f) const {
        return static_cast<std::size_t>(f.hash());
    }
};

Formula f_true();
Formula f_false();
Formula atom(const std::string& name);
Formula mk_not(Formula f);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_implies(Formula a, Formula b);
Formula mk_iff(Formula a, Formula b);
Formula mk_next(Formula f);
Formula mk_weak_next(Formula f);
Formula mk_until(Formula a, Formula b);
Formula mk_release(Formula a, Formula b);
Formula mk_eventually(Formula f);
Formula mk_globally(Formula f);
Formula end_alive();
Formula end_dead();

// Concrete syntax:
//   f := "true" | "false" | IDENT | "!" f | "X" f | "F" f | "G" f
//      | f "U" f | f "&" f | f "|" f | f "->" f | f "<->" f | "(" f ")"
// Precedence, tightest first: {!, X, F, G}, U, &, |, -> (right assoc), <->.
// IDENT matches [A-Za-z_][A-Za-z0-9_]* minus the keywords, so "Xp" is an
// identifier while "X p" applies the operator. Errors carry a byte offset.
// The second form additionally rejects atoms outside `universe`.
Formula parse(const std::string& text);
Formula parse(const std::string& text, const std::vector<Proposition>& universe);

// Fully parenthesized round-trip form: parse(to_string(f)) == f for any
// formula built from surface syntax. Internal operators print as WX / R /
// ALIVE / DEAD for diagnostics; those strings do not re-parse.
std::string to_string(const Formula& f);

// Negation normal form: negation pushed to atoms via the finite-trace duals
// (!X -> WX of negation, !U -> R of negations, !F -> G, !G -> F); implication
// and equivalence expanded. Output uses only atoms, literals, And, Or, Next,
// WeakNext, Until, Release, Eventually, Globally (plus end markers, which are
// self-dual under the ALIVE/DEAD pairing).
Formula to_nnf(const Formula& f);

bool is_temporal_free(const Formula& f);

// All atom names occurring in f, sorted.
std::vector<Proposition> propositions(const Formula& f);

// Finite-trace satisfaction t, i |= f. Throws input_error on an empty trace
// or i out of range; end markers never appear in caller-facing formulas and
// are rejected.
bool eval_trace(const Formula& f, const Trace& t, std::size_t i);

// Propositional evaluation against a single letter. Throws input_error when
// f contains a temporal operator. Agrees with eval_trace(f, {a}, 0) on
// temporal-free formulas.
bool eval_assignment(const Formula& f, const TraceLetter& a);

} // namespace mbsd::ltlf

#endif
