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

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace mbsd::automata {

using ltlf::Formula;
using ltlf::Op;

/* ---------------- canonicalization ---------------- */

namespace {

// Flatten an And/Or spine into its operand list.
void flatten(Op op, Formula f, std::vector<Formula>& out) {
    if (f.op() == op) {
        flatten(op, f.lhs(), out);
        flatten(op, f.rhs(), out);
    } else {
        out.push_back(f);
    }
}

bool is_literal(Formula f) {
    return f.op() == Op::Atom || (f.op() == Op::Not && f.lhs().op() == Op::Atom);
}

// Rebuild a flattened operand list as a right-nested chain in list order.
Formula rebuild(Op op, const std::vector<Formula>& args) {
    Formula acc = args.back();
    for (std::size_t i = args.size() - 1; i-- > 0;)
        acc = (op == Op::And) ? mk_and(args[i], acc) : mk_or(args[i], acc);
    return acc;
}

Formula canon_rec(Formula f, std::unordered_map<const ltlf::FormulaNode*, Formula>& memo);

// Sorted, deduplicated, constant-folded and absorbed And/Or operand list.
Formula canon_nary(Op op, Formula f,
                   std::unordered_map<const ltlf::FormulaNode*, Formula>& memo) {
    const Formula unit = (op == Op::And) ? ltlf::f_true() : ltlf::f_false();
    const Formula zero = (op == Op::And) ? ltlf::f_false() : ltlf::f_true();

    std::vector<Formula> raw;
    flatten(op, f, raw);
    std::set<Formula, ltlf::FormulaLess> args;
    for (Formula a : raw) {
        Formula c = canon_rec(a, memo);
        if (c == zero) return zero;
        if (c == unit) continue;
        if (c.op() == op) { // canonical child may itself be a chain
            std::vector<Formula> inner;
            flatten(op, c, inner);
            args.insert(inner.begin(), inner.end());
        } else {
            args.insert(c);
        }
    }
    if (args.empty()) return unit;

    // complementary literals: p and !p together collapse the whole chain
    for (Formula a : args) {
        if (a.op() == Op::Atom && args.count(mk_not(a))) return zero;
    }

    // absorption: drop any dual-op chain that contains another operand
    // (a & (a | b) = a, dually a | (a & b) = a)
    const Op dual = (op == Op::And) ? Op::Or : Op::And;
    std::vector<Formula> kept;
    for (Formula a : args) {
        bool absorbed = false;
        if (a.op() == dual) {
            std::vector<Formula> inner;
            flatten(dual, a, inner);
            for (Formula x : inner) {
                if (x != a && args.count(x)) { absorbed = true; break; }
            }
        }
        if (!absorbed) kept.push_back(a);
    }
    return rebuild(op, kept);
}

// Idempotent smart constructors: F F g == F g, G G g == G g, constants pass
// through. Used everywhere a fold can introduce a fresh F or G wrapper.
Formula fold_eventually(Formula c) {
    if (c.op() == Op::True || c.op() == Op::False || c.op() == Op::Eventually) return c;
    return mk_eventually(c);
}

Formula fold_globally(Formula c) {
    if (c.op() == Op::True || c.op() == Op::False || c.op() == Op::Globally) return c;
    return mk_globally(c);
}

Formula canon_rec(Formula f, std::unordered_map<const ltlf::FormulaNode*, Formula>& memo) {
    auto it = memo.find(f.raw());
    if (it != memo.end()) return it->second;
    Formula r;
    switch (f.op()) {
        case Op::True:
        case Op::False:
        case Op::Atom:
        case Op::EndAlive:
        case Op::EndDead: r = f; break;
        case Op::Not: {
            Formula c = canon_rec(f.lhs(), memo);
            if (c.op() == Op::True) r = ltlf::f_false();
            else if (c.op() == Op::False) r = ltlf::f_true();
            else if (c.op() == Op::Not) r = c.lhs();
            else r = mk_not(c);
            break;
        }
        case Op::And:
        case Op::Or: r = canon_nary(f.op(), f, memo); break;
        // Temporal constant/unit folds below are sound over finite nonempty
        // traces and keep residual spaces from filling up with dead terms.
        case Op::Next: {
            Formula c = canon_rec(f.lhs(), memo);
            r = c.op() == Op::False ? c : mk_next(c); // X false never holds
            break;
        }
        case Op::WeakNext: {
            Formula c = canon_rec(f.lhs(), memo);
            r = c.op() == Op::True ? c : mk_weak_next(c);
            break;
        }
        case Op::Until: {
            Formula a = canon_rec(f.lhs(), memo);
            Formula b = canon_rec(f.rhs(), memo);
            if (b.op() == Op::True || b.op() == Op::False) r = b;
            else if (a.op() == Op::False) r = b;                // right side must hold now
            else if (a.op() == Op::True) r = fold_eventually(b);
            else r = mk_until(a, b);
            break;
        }
        case Op::Release: {
            Formula a = canon_rec(f.lhs(), memo);
            Formula b = canon_rec(f.rhs(), memo);
            if (b.op() == Op::True || b.op() == Op::False) r = b;
            else if (a.op() == Op::True) r = b;                 // released immediately
            else if (a.op() == Op::False) r = fold_globally(b);
            else r = mk_release(a, b);
            break;
        }
        case Op::Eventually: r = fold_eventually(canon_rec(f.lhs(), memo)); break;
        case Op::Globally: r = fold_globally(canon_rec(f.lhs(), memo)); break;
        case Op::Implies:
        case Op::Iff:
            throw std::logic_error("automata: canonical() expects a negation-normal form");
    }
    memo.emplace(f.raw(), r);
    return r;
}

std::unordered_map<const ltlf::FormulaNode*, Formula>& canon_memo() {
    static std::unordered_map<const ltlf::FormulaNode*, Formula> m; // single-threaded
    return m;
}

} // namespace

Formula canonical(Formula f) { return canon_rec(f, canon_memo()); }

/* ---------------- progression ---------------- */

namespace {

// Memoized per node: hash-consed residuals are DAGs, and shared subterms
// would otherwise be re-progressed once per tree occurrence (exponential on
// the chains the Until rule produces).
Formula prog_raw(Formula f, const ltlf::TraceLetter& a,
                 std::unordered_map<const ltlf::FormulaNode*, Formula>& memo) {
    auto it = memo.find(f.raw());
    if (it != memo.end()) return it->second;
    Formula r;
    switch (f.op()) {
        case Op::True: r = ltlf::f_true(); break;
        case Op::False: r = ltlf::f_false(); break;
        case Op::EndAlive: r = ltlf::f_true(); break;
        case Op::EndDead: r = ltlf::f_false(); break;
        case Op::Atom:
            r = a.contains(f.atom_name()) ? ltlf::f_true() : ltlf::f_false();
            break;
        case Op::Not:
            if (f.lhs().op() != Op::Atom)
                throw std::logic_error("automata: progress on non-NNF residual");
            r = a.contains(f.lhs().atom_name()) ? ltlf::f_false() : ltlf::f_true();
            break;
        case Op::And: r = mk_and(prog_raw(f.lhs(), a, memo), prog_raw(f.rhs(), a, memo)); break;
        case Op::Or: r = mk_or(prog_raw(f.lhs(), a, memo), prog_raw(f.rhs(), a, memo)); break;
        case Op::Next: r = mk_and(f.lhs(), ltlf::end_alive()); break;
        case Op::WeakNext: r = mk_or(f.lhs(), ltlf::end_dead()); break;
        case Op::Until:
            r = mk_or(prog_raw(f.rhs(), a, memo), mk_and(prog_raw(f.lhs(), a, memo), f));
            break;
        case Op::Release:
            r = mk_and(prog_raw(f.rhs(), a, memo), mk_or(prog_raw(f.lhs(), a, memo), f));
            break;
        case Op::Eventually: r = mk_or(prog_raw(f.lhs(), a, memo), f); break;
        case Op::Globally: r = mk_and(prog_raw(f.lhs(), a, memo), f); break;
        case Op::Implies:
        case Op::Iff:
            throw std::logic_error("automata: progress on non-NNF residual");
    }
    memo.emplace(f.raw(), r);
    return r;
}

bool end_acc_rec(Formula r, std::unordered_map<const ltlf::FormulaNode*, bool>& memo) {
    auto it = memo.find(r.raw());
    if (it != memo.end()) return it->second;
    bool b = false;
    switch (r.op()) {
        case Op::True: b = true; break;
        case Op::False: break;
        case Op::Atom:
        case Op::Not: break;
        case Op::EndAlive: break;
        case Op::EndDead: b = true; break;
        case Op::And: b = end_acc_rec(r.lhs(), memo) && end_acc_rec(r.rhs(), memo); break;
        case Op::Or: b = end_acc_rec(r.lhs(), memo) || end_acc_rec(r.rhs(), memo); break;
        case Op::Next:
        case Op::Until:
        case Op::Eventually: break;
        case Op::WeakNext:
        case Op::Release:
        case Op::Globally: b = true; break;
        case Op::Implies:
        case Op::Iff:
            throw std::logic_error("automata: end_accepting on non-NNF residual");
    }
    memo.emplace(r.raw(), b);
    return b;
}

} // namespace

Formula progress(Formula r, const ltlf::TraceLetter& a) {
    std::unordered_map<const ltlf::FormulaNode*, Formula> memo;
    return canonical(prog_raw(r, a, memo));
}

bool end_accepting(Formula r) {
    std::unordered_map<const ltlf::FormulaNode*, bool> memo;
    return end_acc_rec(r, memo);
}

/* ---------------- explicit construction ---------------- */

Dfa build_dfa(Formula f, std::vector<ltlf::Proposition> props, const DfaCaps& caps) {
    for (const auto& p : ltlf::propositions(f)) {
        if (!std::binary_search(props.begin(), props.end(), p)) props.push_back(p);
    }
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());
    if (props.size() > caps.max_props)
        throw cap_error("automata: " + std::to_string(props.size()) +
                        " propositions exceed the explicit-alphabet cap of " +
                        std::to_string(caps.max_props) + "; use the lazy progression path");

    const std::size_t nletters = std::size_t(1) << props.size();
    std::vector<ltlf::TraceLetter> letters(nletters);
    for (std::size_t m = 0; m < nletters; ++m) {
        std::vector<ltlf::Proposition> ps;
        for (std::size_t i = 0; i < props.size(); ++i)
            if (m & (std::size_t(1) << i)) ps.push_back(props[i]);
        letters[m] = ltlf::TraceLetter(std::move(ps));
    }

    Dfa d;
    d.props = props;
    std::vector<Formula> residuals;
    std::unordered_map<Formula, std::uint32_t, ltlf::FormulaHash> index;
    std::deque<std::uint32_t> queue;

    auto intern_state = [&](Formula r) -> std::uint32_t {
        auto it = index.find(r);
        if (it != index.end()) return it->second;
        if (residuals.size() >= caps.max_states)
            throw cap_error("automata: residual BFS exceeded " +
                            std::to_string(caps.max_states) + " states for formula " +
                            ltlf::to_string(f));
        auto id = static_cast<std::uint32_t>(residuals.size());
        residuals.push_back(r);
        index.emplace(r, id);
        queue.push_back(id);
        return id;
    };

    intern_state(canonical(ltlf::to_nnf(f)));
    while (!queue.empty()) {
        std::uint32_t q = queue.front();
        queue.pop_front();
        if (d.trans.size() <= q) d.trans.resize(q + 1);
        d.trans[q].resize(nletters);
        Formula r = residuals[q];
        for (std::size_t m = 0; m < nletters; ++m)
            d.trans[q][m] = intern_state(progress(r, letters[m]));
    }
    d.accepting.resize(residuals.size());
    for (std::size_t q = 0; q < residuals.size(); ++q) d.accepting[q] = end_accepting(residuals[q]);
    d.init = 0;
    return d;
}

/* ---------------- minimization ---------------- */

Dfa minimize(const Dfa& d) {
    const std::size_t nl = d.num_letters();

    // reachable restriction
    std::vector<std::uint32_t> order;
    std::vector<std::int64_t> reach(d.num_states(), -1);
    order.push_back(d.init);
    reach[d.init] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t m = 0; m < nl; ++m) {
            std::uint32_t t = d.trans[order[i]][m];
            if (reach[t] < 0) {
                reach[t] = static_cast<std::int64_t>(order.size());
                order.push_back(t);
            }
        }
    }
    const std::size_t n = order.size();
    std::vector<std::vector<std::uint32_t>> trans(n, std::vector<std::uint32_t>(nl));
    std::vector<bool> acc(n);
    for (std::size_t q = 0; q < n; ++q) {
        acc[q] = d.accepting[order[q]];
        for (std::size_t m = 0; m < nl; ++m)
            trans[q][m] = static_cast<std::uint32_t>(reach[d.trans[order[q]][m]]);
    }

    // Hopcroft partition refinement
    std::vector<std::vector<std::vector<std::uint32_t>>> inv(
        n, std::vector<std::vector<std::uint32_t>>(nl));
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t m = 0; m < nl; ++m) inv[trans[q][m]][m].push_back(static_cast<std::uint32_t>(q));

    std::vector<std::uint32_t> block(n, 0);
    std::vector<std::vector<std::uint32_t>> blocks;
    {
        std::vector<std::uint32_t> a, r;
        for (std::size_t q = 0; q < n; ++q) (acc[q] ? a : r).push_back(static_cast<std::uint32_t>(q));
        if (!r.empty()) blocks.push_back(r);
        if (!a.empty()) blocks.push_back(a);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (std::uint32_t q : blocks[b]) block[q] = static_cast<std::uint32_t>(b);
    }
    std::deque<std::pair<std::uint32_t, std::size_t>> work; // (block, letter)
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t m = 0; m < nl; ++m) work.emplace_back(static_cast<std::uint32_t>(b), m);

    std::vector<std::uint32_t> touched;
    std::vector<std::size_t> hits(blocks.size(), 0);
    while (!work.empty()) {
        auto [sb, m] = work.front();
        work.pop_front();
        std::vector<std::uint32_t> pre;
        for (std::uint32_t q : blocks[sb])
            for (std::uint32_t p : inv[q][m]) pre.push_back(p);
        if (pre.empty()) continue;

        touched.clear();
        hits.resize(blocks.size(), 0);
        for (std::uint32_t p : pre) {
            if (hits[block[p]]++ == 0) touched.push_back(block[p]);
        }
        for (std::uint32_t b : touched) {
            const std::size_t inb = hits[b];
            hits[b] = 0;
            if (inb == blocks[b].size()) continue; // no split
            std::vector<std::uint32_t> in, out;
            std::set<std::uint32_t> preset(pre.begin(), pre.end());
            for (std::uint32_t q : blocks[b]) (preset.count(q) ? in : out).push_back(q);
            auto nb = static_cast<std::uint32_t>(blocks.size());
            // keep the larger part in place, enqueue the smaller
            std::vector<std::uint32_t>& small = in.size() <= out.size() ? in : out;
            std::vector<std::uint32_t>& large = in.size() <= out.size() ? out : in;
            blocks[b] = large;
            blocks.push_back(small);
            hits.push_back(0);
            for (std::uint32_t q : blocks[nb]) block[q] = nb;
            for (std::size_t mm = 0; mm < nl; ++mm) work.emplace_back(nb, mm);
        }
    }

    // renumber classes by BFS discovery from the initial class
    std::vector<std::int64_t> renum(blocks.size(), -1);
    std::vector<std::uint32_t> corder;
    renum[block[0]] = 0;
    corder.push_back(block[0]);
    for (std::size_t i = 0; i < corder.size(); ++i) {
        std::uint32_t rep = blocks[corder[i]][0];
        for (std::size_t m = 0; m < nl; ++m) {
            std::uint32_t tb = block[trans[rep][m]];
            if (renum[tb] < 0) {
                renum[tb] = static_cast<std::int64_t>(corder.size());
                corder.push_back(tb);
            }
        }
    }

    Dfa out;
    out.props = d.props;
    out.init = 0;
    out.trans.resize(corder.size(), std::vector<std::uint32_t>(nl));
    out.accepting.resize(corder.size());
    for (std::size_t c = 0; c < corder.size(); ++c) {
        std::uint32_t rep = blocks[corder[c]][0];
        out.accepting[c] = acc[rep];
        for (std::size_t m = 0; m < nl; ++m)
            out.trans[c][m] = static_cast<std::uint32_t>(renum[block[trans[rep][m]]]);
    }
    return out;
}

/* ---------------- running & export ---------------- */

std::uint32_t letter_mask(const Dfa& d, const ltlf::TraceLetter& a) {
    std::uint32_t m = 0;
    for (const auto& p : a.props()) {
        auto it = std::lower_bound(d.props.begin(), d.props.end(), p);
        if (it == d.props.end() || *it != p)
            throw input_error("automata: unknown proposition '" + p + "' in letter");
        m |= std::uint32_t(1) << (it - d.props.begin());
    }
    return m;
}

ltlf::TraceLetter mask_letter(const Dfa& d, std::uint32_t mask) {
    std::vector<ltlf::Proposition> ps;
    for (std::size_t i = 0; i < d.props.size(); ++i)
        if (mask & (std::uint32_t(1) << i)) ps.push_back(d.props[i]);
    return ltlf::TraceLetter(std::move(ps));
}

bool accepts(const Dfa& d, const ltlf::Trace& w) {
    if (w.empty()) throw input_error("automata: accepts requires a nonempty word");
    std::uint32_t q = d.init;
    for (const auto& a : w) q = d.trans[q][letter_mask(d, a)];
    return d.accepting[q];
}

namespace {
std::string letter_str(const Dfa& d, std::uint32_t mask) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < d.props.size(); ++i) {
        if (mask & (std::uint32_t(1) << i)) {
            if (!first) s += ",";
            s += d.props[i];
            first = false;
        }
    }
    return s + "}";
}
} // namespace

std::string to_dot(const Dfa& d) {
    std::ostringstream os;
    os << "digraph dfa {\n  rankdir=LR;\n  __init [shape=point];\n";
    for (std::size_t q = 0; q < d.num_states(); ++q)
        os << "  q" << q << " [shape=" << (d.accepting[q] ? "doublecircle" : "circle") << "];\n";
    os << "  __init -> q" << d.init << ";\n";
    for (std::size_t q = 0; q < d.num_states(); ++q)
        for (std::size_t m = 0; m < d.num_letters(); ++m)
            os << "  q" << q << " -> q" << d.trans[q][m] << " [label=\""
               << letter_str(d, static_cast<std::uint32_t>(m)) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string to_json(const Dfa& d) {
    nlohmann::json j;
    j["props"] = d.props;
    j["states"] = d.num_states();
    j["init"] = d.init;
    std::vector<std::size_t> acc;
    for (std::size_t q = 0; q < d.num_states(); ++q)
        if (d.accepting[q]) acc.push_back(q);
    j["accepting"] = acc;
    j["transitions"] = d.trans;
    return j.dump(2) + "\n";
}

} // namespace mbsd::automata
