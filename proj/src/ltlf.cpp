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

#include "mbsd/ltlf.hpp"

#include "mbsd/errors.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>

namespace mbsd::ltlf {

bool is_valid_proposition(const std::string& name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    // keywords of the formula grammar are not identifiers
    return name != "true" && name != "false" && name != "X" && name != "F" &&
           name != "G" && name != "U";
}

TraceLetter::TraceLetter(std::vector<Proposition> props) : props_(std::move(props)) {
    std::sort(props_.begin(), props_.end());
    props_.erase(std::unique(props_.begin(), props_.end()), props_.end());
}

bool TraceLetter::contains(const Proposition& p) const {
    return std::binary_search(props_.begin(), props_.end(), p);
}

TraceLetter TraceLetter::unite(const TraceLetter& a, const TraceLetter& b) {
    std::vector<Proposition> out;
    out.reserve(a.props_.size() + b.props_.size());
    std::set_union(a.props_.begin(), a.props_.end(), b.props_.begin(), b.props_.end(),
                   std::back_inserter(out));
    TraceLetter r;
    r.props_ = std::move(out);
    return r;
}

/* ---------------- hash-consed node store ---------------- */

namespace {

struct NodeKey {
    Op op;
    const FormulaNode* lhs;
    const FormulaNode* rhs;
    std::string name;
    bool operator==(const NodeKey& o) const {
        return op == o.op && lhs == o.lhs && rhs == o.rhs && name == o.name;
    }
};

std::uint64_t mix(std::uint64_t h) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

std::uint64_t node_hash(const NodeKey& k) {
    std::uint64_t h = static_cast<std::uint64_t>(k.op) + 0x9e3779b97f4a7c15ULL;
    if (k.lhs) h = mix(h ^ k.lhs->hash);
    if (k.rhs) h = mix(h ^ (k.rhs->hash + 0x165667b19e3779f9ULL));
    if (!k.name.empty()) h = mix(h ^ std::hash<std::string>{}(k.name));
    return mix(h);
}

struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
        return static_cast<std::size_t>(node_hash(k));
    }
};

struct Store {
    std::deque<FormulaNode> nodes;
    std::unordered_map<NodeKey, const FormulaNode*, NodeKeyHash> interned;
};

Store& store() {
    static Store s; // single-threaded toolkit; never freed
    return s;
}

Formula intern(Op op, const FormulaNode* lhs, const FormulaNode* rhs,
               const std::string& name = std::string()) {
    Store& s = store();
    NodeKey key{op, lhs, rhs, name};
    auto it = s.interned.find(key);
    if (it != s.interned.end()) return Formula(it->second);
    s.nodes.push_back(FormulaNode{op, lhs, rhs, name, node_hash(key),
                                  static_cast<std::uint32_t>(s.nodes.size())});
    const FormulaNode* n = &s.nodes.back();
    s.interned.emplace(std::move(key), n);
    return Formula(n);
}

} // namespace

Formula f_true() { return intern(Op::True, nullptr, nullptr); }
Formula f_false() { return intern(Op::False, nullptr, nullptr); }

Formula atom(const std::string& name) {
    if (!is_valid_proposition(name))
        throw input_error("ltlf: invalid proposition name '" + name + "'");
    return intern(Op::Atom, nullptr, nullptr, name);
}

Formula mk_not(Formula f) { return intern(Op::Not, f.raw(), nullptr); }
Formula mk_and(Formula a, Formula b) { return intern(Op::And, a.raw(), b.raw()); }
Formula mk_or(Formula a, Formula b) { return intern(Op::Or, a.raw(), b.raw()); }
Formula mk_implies(Formula a, Formula b) { return intern(Op::Implies, a.raw(), b.raw()); }
Formula mk_iff(Formula a, Formula b) { return intern(Op::Iff, a.raw(), b.raw()); }
Formula mk_next(Formula f) { return intern(Op::Next, f.raw(), nullptr); }
Formula mk_weak_next(Formula f) { return intern(Op::WeakNext, f.raw(), nullptr); }
Formula mk_until(Formula a, Formula b) { return intern(Op::Until, a.raw(), b.raw()); }
Formula mk_release(Formula a, Formula b) { return intern(Op::Release, a.raw(), b.raw()); }
Formula mk_eventually(Formula f) { return intern(Op::Eventually, f.raw(), nullptr); }
Formula mk_globally(Formula f) { return intern(Op::Globally, f.raw(), nullptr); }
Formula end_alive() { return intern(Op::EndAlive, nullptr, nullptr); }
Formula end_dead() { return intern(Op::EndDead, nullptr, nullptr); }

int compare(const Formula& a, const Formula& b) {
    if (a.raw() == b.raw()) return 0;
    if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
    if (a.op() == Op::Atom) return a.atom_name().compare(b.atom_name());
    if (a.raw()->lhs) {
        int c = compare(a.lhs(), b.lhs());
        if (c != 0) return c;
    }
    if (a.raw()->rhs) {
        int c = compare(a.rhs(), b.rhs());
        if (c != 0) return c;
    }
    return 0; // unreachable for interned nodes
}

/* ---------------- parser ---------------- */

namespace {

enum class Tok {
    LParen, RParen, Not, And, Or, Implies, Iff,
    Next, Eventually, Globally, Until, True, False, Ident, End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

[[noreturn]] void syntax_error(std::size_t offset, const std::string& msg) {
    throw input_error("ltlf: syntax error at offset " + std::to_string(offset) + ": " + msg);
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        std::size_t at = i;
        switch (c) {
            case '(': out.push_back({Tok::LParen, "(", at}); ++i; continue;
            case ')': out.push_back({Tok::RParen, ")", at}); ++i; continue;
            case '!': out.push_back({Tok::Not, "!", at}); ++i; continue;
            case '&': out.push_back({Tok::And, "&", at}); ++i; continue;
            case '|': out.push_back({Tok::Or, "|", at}); ++i; continue;
            case '-':
                if (i + 1 < text.size() && text[i + 1] == '>') {
                    out.push_back({Tok::Implies, "->", at});
                    i += 2;
                    continue;
                }
                syntax_error(at, "expected '->'");
            case '<':
                if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
                    out.push_back({Tok::Iff, "<->", at});
                    i += 3;
                    continue;
                }
                syntax_error(at, "expected '<->'");
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i + 1;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            i = j;
            if (word == "true") out.push_back({Tok::True, word, at});
            else if (word == "false") out.push_back({Tok::False, word, at});
            else if (word == "X") out.push_back({Tok::Next, word, at});
            else if (word == "F") out.push_back({Tok::Eventually, word, at});
            else if (word == "G") out.push_back({Tok::Globally, word, at});
            else if (word == "U") out.push_back({Tok::Until, word, at});
            else out.push_back({Tok::Ident, word, at});
            continue;
        }
        syntax_error(at, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", text.size()});
    return out;
}

class Parser {
  public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    Formula run() {
        Formula f = parse_iff();
        expect(Tok::End, "end of input");
        return f;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    bool eat(Tok k) {
        if (peek().kind == k) { ++pos_; return true; }
        return false;
    }
    void expect(Tok k, const std::string& what) {
        if (!eat(k)) syntax_error(peek().offset, "expected " + what);
    }

    Formula parse_iff() {
        Formula f = parse_implies();
        while (eat(Tok::Iff)) f = mk_iff(f, parse_implies());
        return f;
    }
    Formula parse_implies() {
        Formula f = parse_or();
        if (eat(Tok::Implies)) f = mk_implies(f, parse_implies()); // right assoc
        return f;
    }
    Formula parse_or() {
        Formula f = parse_and();
        while (eat(Tok::Or)) f = mk_or(f, parse_and());
        return f;
    }
    Formula parse_and() {
        Formula f = parse_until();
        while (eat(Tok::And)) f = mk_and(f, parse_until());
        return f;
    }
    Formula parse_until() {
        Formula f = parse_unary();
        if (eat(Tok::Until)) f = mk_until(f, parse_until()); // right assoc
        return f;
    }
    Formula parse_unary() {
        switch (peek().kind) {
            case Tok::Not: take(); return mk_not(parse_unary());
            case Tok::Next: take(); return mk_next(parse_unary());
            case Tok::Eventually: take(); return mk_eventually(parse_unary());
            case Tok::Globally: take(); return mk_globally(parse_unary());
            default: return parse_primary();
        }
    }
    Formula parse_primary() {
        Token t = take();
        switch (t.kind) {
            case Tok::True: return f_true();
            case Tok::False: return f_false();
            case Tok::Ident: return atom(t.text);
            case Tok::LParen: {
                Formula f = parse_iff();
                expect(Tok::RParen, "')'");
                return f;
            }
            default: syntax_error(t.offset, "expected a formula");
        }
    }
};

} // namespace

Formula parse(const std::string& text) { return Parser(text).run(); }

Formula parse(const std::string& text, const std::vector<Proposition>& universe) {
    Formula f = parse(text);
    for (const Proposition& p : propositions(f))
        if (std::find(universe.begin(), universe.end(), p) == universe.end())
            throw input_error("ltlf: atom '" + p + "' is not in the declared universe");
    return f;
}

std::string to_string(const Formula& f) {
    switch (f.op()) {
        case Op::True: return "true";
        case Op::False: return "false";
        case Op::Atom: return f.atom_name();
        case Op::Not: return "(! " + to_string(f.lhs()) + ")";
        case Op::Next: return "(X " + to_string(f.lhs()) + ")";
        case Op::Eventually: return "(F " + to_string(f.lhs()) + ")";
        case Op::Globally: return "(G " + to_string(f.lhs()) + ")";
        case Op::And: return "(" + to_string(f.lhs()) + " & " + to_string(f.rhs()) + ")";
        case Op::Or: return "(" + to_string(f.lhs()) + " | " + to_string(f.rhs()) + ")";
        case Op::Implies: return "(" + to_string(f.lhs()) + " -> " + to_string(f.rhs()) + ")";
        case Op::Iff: return "(" + to_string(f.lhs()) + " <-> " + to_string(f.rhs()) + ")";
        // diagnostics-only forms; deliberately not re-parseable
        case Op::WeakNext: return "(@WX " + to_string(f.lhs()) + ")";
        case Op::Until: return "(" + to_string(f.lhs()) + " U " + to_string(f.rhs()) + ")";
        case Op::Release: return "(" + to_string(f.lhs()) + " @R " + to_string(f.rhs()) + ")";
        case Op::EndAlive: return "@alive";
        case Op::EndDead: return "@dead";
    }
    throw std::logic_error("ltlf: bad op");
}

/* ---------------- negation normal form ---------------- */

namespace {

struct NnfMemo {
    std::unordered_map<const FormulaNode*, Formula> pos, neg;
};

Formula nnf_pos(Formula f, NnfMemo& m);
Formula nnf_neg(Formula f, NnfMemo& m);

Formula nnf_pos(Formula f, NnfMemo& m) {
    auto it = m.pos.find(f.raw());
    if (it != m.pos.end()) return it->second;
    Formula r;
    switch (f.op()) {
        case Op::True:
        case Op::False:
        case Op::Atom:
        case Op::EndAlive:
        case Op::EndDead: r = f; break;
        case Op::Not: r = nnf_neg(f.lhs(), m); break;
        case Op::And: r = mk_and(nnf_pos(f.lhs(), m), nnf_pos(f.rhs(), m)); break;
        case Op::Or: r = mk_or(nnf_pos(f.lhs(), m), nnf_pos(f.rhs(), m)); break;
        case Op::Implies: r = mk_or(nnf_neg(f.lhs(), m), nnf_pos(f.rhs(), m)); break;
        case Op::Iff:
            r = mk_or(mk_and(nnf_pos(f.lhs(), m), nnf_pos(f.rhs(), m)),
                      mk_and(nnf_neg(f.lhs(), m), nnf_neg(f.rhs(), m)));
            break;
        case Op::Next: r = mk_next(nnf_pos(f.lhs(), m)); break;
        case Op::WeakNext: r = mk_weak_next(nnf_pos(f.lhs(), m)); break;
        case Op::Until: r = mk_until(nnf_pos(f.lhs(), m), nnf_pos(f.rhs(), m)); break;
        case Op::Release: r = mk_release(nnf_pos(f.lhs(), m), nnf_pos(f.rhs(), m)); break;
        case Op::Eventually: r = mk_eventually(nnf_pos(f.lhs(), m)); break;
        case Op::Globally: r = mk_globally(nnf_pos(f.lhs(), m)); break;
    }
    m.pos.emplace(f.raw(), r);
    return r;
}

Formula nnf_neg(Formula f, NnfMemo& m) {
    auto it = m.neg.find(f.raw());
    if (it != m.neg.end()) return it->second;
    Formula r;
    switch (f.op()) {
        case Op::True: r = f_false(); break;
        case Op::False: r = f_true(); break;
        case Op::Atom: r = mk_not(f); break;
        case Op::EndAlive: r = end_dead(); break;
        case Op::EndDead: r = end_alive(); break;
        case Op::Not: r = nnf_pos(f.lhs(), m); break;
        case Op::And: r = mk_or(nnf_neg(f.lhs(), m), nnf_neg(f.rhs(), m)); break;
        case Op::Or: r = mk_and(nnf_neg(f.lhs(), m), nnf_neg(f.rhs(), m)); break;
        case Op::Implies: r = mk_and(nnf_pos(f.lhs(), m), nnf_neg(f.rhs(), m)); break;
        case Op::Iff:
            r = mk_or(mk_and(nnf_pos(f.lhs(), m), nnf_neg(f.rhs(), m)),
                      mk_and(nnf_neg(f.lhs(), m), nnf_pos(f.rhs(), m)));
            break;
        case Op::Next: r = mk_weak_next(nnf_neg(f.lhs(), m)); break;
        case Op::WeakNext: r = mk_next(nnf_neg(f.lhs(), m)); break;
        case Op::Until: r = mk_release(nnf_neg(f.lhs(), m), nnf_neg(f.rhs(), m)); break;
        case Op::Release: r = mk_until(nnf_neg(f.lhs(), m), nnf_neg(f.rhs(), m)); break;
        case Op::Eventually: r = mk_globally(nnf_neg(f.lhs(), m)); break;
        case Op::Globally: r = mk_eventually(nnf_neg(f.lhs(), m)); break;
    }
    m.neg.emplace(f.raw(), r);
    return r;
}

} // namespace

Formula to_nnf(const Formula& f) {
    NnfMemo m;
    return nnf_pos(f, m);
}

bool is_temporal_free(const Formula& f) {
    switch (f.op()) {
        case Op::True:
        case Op::False:
        case Op::Atom: return true;
        case Op::Not: return is_temporal_free(f.lhs());
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: return is_temporal_free(f.lhs()) && is_temporal_free(f.rhs());
        default: return false;
    }
}

namespace {
void collect_atoms(const Formula& f, std::set<std::string>& out) {
    switch (f.op()) {
        case Op::Atom: out.insert(f.atom_name()); return;
        case Op::True:
        case Op::False:
        case Op::EndAlive:
        case Op::EndDead: return;
        default:
            if (f.raw()->lhs) collect_atoms(f.lhs(), out);
            if (f.raw()->rhs) collect_atoms(f.rhs(), out);
    }
}
} // namespace

std::vector<Proposition> propositions(const Formula& f) {
    std::set<std::string> s;
    collect_atoms(f, s);
    return std::vector<Proposition>(s.begin(), s.end());
}

/* ---------------- finite-trace evaluation ---------------- */

namespace {

bool eval_at(const Formula& f, const Trace& t, std::size_t i) {
    const std::size_t last = t.size() - 1;
    switch (f.op()) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Atom: return t[i].contains(f.atom_name());
        case Op::Not: return !eval_at(f.lhs(), t, i);
        case Op::And: return eval_at(f.lhs(), t, i) && eval_at(f.rhs(), t, i);
        case Op::Or: return eval_at(f.lhs(), t, i) || eval_at(f.rhs(), t, i);
        case Op::Implies: return !eval_at(f.lhs(), t, i) || eval_at(f.rhs(), t, i);
        case Op::Iff: return eval_at(f.lhs(), t, i) == eval_at(f.rhs(), t, i);
        case Op::Next: return i < last && eval_at(f.lhs(), t, i + 1);
        case Op::WeakNext: return i == last || eval_at(f.lhs(), t, i + 1);
        case Op::Until:
            for (std::size_t j = i; j <= last; ++j) {
                if (eval_at(f.rhs(), t, j)) {
                    bool all = true;
                    for (std::size_t k = i; k < j; ++k)
                        if (!eval_at(f.lhs(), t, k)) { all = false; break; }
                    if (all) return true;
                }
            }
            return false;
        case Op::Release:
            // a R b == !(!a U !b)
            for (std::size_t j = i; j <= last; ++j) {
                if (!eval_at(f.rhs(), t, j)) {
                    bool all = true;
                    for (std::size_t k = i; k < j; ++k)
                        if (eval_at(f.lhs(), t, k)) { all = false; break; }
                    if (all) return false;
                }
            }
            return true;
        case Op::Eventually:
            for (std::size_t j = i; j <= last; ++j)
                if (eval_at(f.lhs(), t, j)) return true;
            return false;
        case Op::Globally:
            for (std::size_t j = i; j <= last; ++j)
                if (!eval_at(f.lhs(), t, j)) return false;
            return true;
        case Op::EndAlive:
        case Op::EndDead:
            throw input_error("ltlf: end markers are not evaluable formulas");
    }
    throw std::logic_error("ltlf: bad op");
}

} // namespace

bool eval_trace(const Formula& f, const Trace& t, std::size_t i) {
    if (t.empty()) throw input_error("ltlf: eval_trace on empty trace");
    if (i >= t.size())
        throw input_error("ltlf: eval_trace position " + std::to_string(i) +
                          " out of range for trace of length " + std::to_string(t.size()));
    return eval_at(f, t, i);
}

bool eval_assignment(const Formula& f, const TraceLetter& a) {
    if (!is_temporal_free(f))
        throw input_error("ltlf: eval_assignment requires a temporal-free formula, got " +
                          to_string(f));
    return eval_trace(f, Trace{a}, 0);
}

} // namespace mbsd::ltlf
