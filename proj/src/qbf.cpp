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

#include "mbsd/qbf.hpp"

#include "mbsd/errors.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace mbsd::qbf {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw input_error("qdimacs: " + msg); }

} // namespace

QbfCnf parse_qdimacs(const std::string& text) {
    QbfCnf q;
    std::istringstream in(text);
    std::string line;
    bool seen_header = false, in_clauses = false;
    std::size_t declared_clauses = 0;
    std::vector<bool> quantified;

    auto check_var = [&](std::uint32_t v) {
        if (v == 0 || v > q.num_vars)
            bad("variable " + std::to_string(v) + " out of range (declared " +
                std::to_string(q.num_vars) + ")");
    };

    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue; // blank
        if (first == "c") continue;   // comment
        const std::string where = " (line " + std::to_string(lineno) + ")";

        if (first == "p") {
            if (seen_header) bad("duplicate header" + where);
            std::string fmt;
            long long nv = -1, nc = -1;
            if (!(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0)
                bad("malformed header" + where);
            q.num_vars = static_cast<std::uint32_t>(nv);
            declared_clauses = static_cast<std::size_t>(nc);
            quantified.assign(q.num_vars + 1, false);
            seen_header = true;
            continue;
        }
        if (!seen_header) bad("expected `p cnf` header before" + where);

        if (first == "a" || first == "e") {
            if (in_clauses) bad("quantifier line after clauses" + where);
            const bool forall = first == "a";
            long long tok;
            bool terminated = false;
            while (ls >> tok) {
                if (tok == 0) { terminated = true; break; }
                if (tok < 0) bad("negative variable in quantifier line" + where);
                auto v = static_cast<std::uint32_t>(tok);
                check_var(v);
                if (quantified[v]) bad("variable " + std::to_string(v) + " quantified twice" + where);
                quantified[v] = true;
                q.prefix.emplace_back(forall, v);
            }
            if (!terminated) bad("quantifier line not 0-terminated" + where);
            continue;
        }

        // clause line
        in_clauses = true;
        std::istringstream cs(line);
        std::vector<std::int32_t> clause;
        long long tok;
        bool terminated = false;
        while (cs >> tok) {
            if (terminated) bad("literals after the terminating 0" + where);
            if (tok == 0) { terminated = true; continue; }
            auto v = static_cast<std::uint32_t>(tok < 0 ? -tok : tok);
            check_var(v);
            if (!quantified[v]) bad("free variable " + std::to_string(v) + where);
            clause.push_back(static_cast<std::int32_t>(tok));
        }
        if (!terminated) bad("clause not 0-terminated" + where);
        if (cs.fail() && !cs.eof()) bad("non-numeric token in clause" + where);
        q.clauses.push_back(std::move(clause));
    }
    if (!seen_header) bad("missing `p cnf` header");
    if (q.clauses.size() != declared_clauses)
        bad("header declares " + std::to_string(declared_clauses) + " clauses but " +
            std::to_string(q.clauses.size()) + " were given");
    return q;
}

namespace {

bool clauses_hold(const QbfCnf& q, const std::vector<bool>& value) {
    for (const auto& clause : q.clauses) {
        bool sat = false;
        for (std::int32_t lit : clause) {
            const auto v = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
            if (value[v] == (lit > 0)) { sat = true; break; }
        }
        if (!sat) return false;
    }
    return true;
}

bool eval_rec(const QbfCnf& q, std::size_t i, std::vector<bool>& value) {
    if (i == q.prefix.size()) return clauses_hold(q, value);
    const auto [forall, v] = q.prefix[i];
    value[v] = false;
    const bool lo = eval_rec(q, i + 1, value);
    if (forall && !lo) return false;
    if (!forall && lo) return true;
    value[v] = true;
    return eval_rec(q, i + 1, value);
}

} // namespace

bool eval_qbf(const QbfCnf& q) {
    if (q.prefix.size() > 22)
        throw cap_error("qbf: the exhaustive evaluator is capped at 22 variables, got " +
                        std::to_string(q.prefix.size()));
    std::vector<bool> value(q.num_vars + 1, false);
    return eval_rec(q, 0, value);
}

bool is_cnf1(const QbfCnf& q) {
    if (q.prefix.size() % 2 != 0) return false;
    std::vector<bool> universal(q.num_vars + 1, false);
    for (std::size_t i = 0; i < q.prefix.size(); ++i) {
        if (q.prefix[i].first != (i % 2 == 0)) return false; // forall on even slots
        if (q.prefix[i].first) universal[q.prefix[i].second] = true;
    }
    for (const auto& clause : q.clauses) {
        int universals = 0;
        for (std::int32_t lit : clause) {
            const auto v = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
            if (v < universal.size() && universal[v]) ++universals;
        }
        if (universals > 1) return false;
    }
    return true;
}

QbfCnf1 cnf_to_cnf1(const QbfCnf& q) {
    QbfCnf1 out;
    out.num_vars = q.num_vars;
    std::unordered_map<std::uint32_t, std::uint32_t> shadow; // universal x -> fresh z
    for (const auto& [forall, v] : q.prefix) {
        if (forall) {
            const std::uint32_t z = ++out.num_vars;
            shadow.emplace(v, z);
            out.prefix.emplace_back(true, v);
            out.prefix.emplace_back(false, z);
        } else {
            // dummy universal restores strict alternation around original exists
            out.prefix.emplace_back(true, ++out.num_vars);
            out.prefix.emplace_back(false, v);
        }
    }
    // link clauses (x | -z), (-x | z) tie each shadow to its universal
    for (const auto& [forall, v] : q.prefix) {
        if (!forall) continue;
        const std::int32_t x = static_cast<std::int32_t>(v);
        const std::int32_t z = static_cast<std::int32_t>(shadow.at(v));
        out.clauses.push_back({x, -z});
        out.clauses.push_back({-x, z});
    }
    for (const auto& clause : q.clauses) {
        std::vector<std::int32_t> rewritten;
        for (std::int32_t lit : clause) {
            const auto v = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
            auto it = shadow.find(v);
            if (it == shadow.end()) rewritten.push_back(lit);
            else rewritten.push_back(lit < 0 ? -static_cast<std::int32_t>(it->second)
                                             : static_cast<std::int32_t>(it->second));
        }
        out.clauses.push_back(std::move(rewritten));
    }
    return out;
}

namespace {

// One diamond chain per agent: m1 -> {t1,f1} -> m2 -> ... -> m{n+1} with a
// self-loop at the end. ti is labeled "p<H>_<i>t", fi "p<H>_<i>f", the last
// major state "p<H>_star"; everything else is unlabeled.
domains::DynamicDomain gadget_domain(char side, std::size_t n) {
    domains::DynamicDomain d;
    const std::string p = std::string("p") + side + "_";
    for (std::size_t i = 1; i <= n; ++i) {
        d.props.push_back(p + std::to_string(i) + "t");
        d.props.push_back(p + std::to_string(i) + "f");
    }
    d.props.push_back(p + "star");
    std::sort(d.props.begin(), d.props.end());

    auto add = [&d](const std::string& id, std::vector<std::string> label) {
        d.ids.push_back(id);
        std::sort(label.begin(), label.end());
        d.labels.push_back(ltlf::TraceLetter{std::move(label)});
        d.succ.emplace_back();
        return static_cast<std::uint32_t>(d.ids.size() - 1);
    };
    std::uint32_t prev = add("m1", {});
    d.init = prev;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::string k = std::to_string(i);
        const std::uint32_t t = add("t" + k, {p + k + "t"});
        const std::uint32_t f = add("f" + k, {p + k + "f"});
        const std::uint32_t m = add("m" + std::to_string(i + 1), {});
        d.succ[prev] = {t, f};
        d.succ[t] = {m};
        d.succ[f] = {m};
        prev = m;
    }
    d.labels[prev] = ltlf::TraceLetter{{p + "star"}};
    d.succ[prev] = {prev}; // terminal self-loop
    return d;
}

} // namespace

instance::MbsdInstance qbf1_to_mbsd(const QbfCnf1& q) {
    if (!is_cnf1(q))
        throw input_error("qbf: input is not in strict-alternation CNF-1 form");
    const std::size_t n = q.prefix.size() / 2;

    // variable -> (is_universal, 1-based chain position)
    std::unordered_map<std::uint32_t, std::pair<bool, std::size_t>> pos;
    for (std::size_t i = 0; i < q.prefix.size(); ++i)
        pos.emplace(q.prefix[i].second, std::make_pair(q.prefix[i].first, i / 2 + 1));

    instance::MbsdInstance p;
    p.domain_a = gadget_domain('A', n);
    p.domain_b = gadget_domain('B', n);
    p.mapping.kind = instance::MappingKind::Target;
    p.stop_agent = instance::StopAgent::B;

    for (const auto& clause : q.clauses) {
        ltlf::Formula premise; // at most one universal literal per clause
        ltlf::Formula conclusion;
        for (std::int32_t lit : clause) {
            const auto v = static_cast<std::uint32_t>(lit < 0 ? -lit : lit);
            const auto [forall, i] = pos.at(v);
            const std::string k = std::to_string(i);
            if (forall) {
                // clause already satisfied when A picks the literal's own
                // value, so the obligation fires on the opposite branch
                premise = ltlf::atom("pA_" + k + (lit > 0 ? "f" : "t"));
            } else {
                ltlf::Formula d = ltlf::atom("pB_" + k + (lit > 0 ? "t" : "f"));
                conclusion = conclusion.valid() ? ltlf::mk_or(conclusion, d) : d;
            }
        }
        // Purely existential clauses (and the stopping conjunct below) get a
        // constant-true premise: the obligation is armed from the very first
        // position. An F(pA_star) premise would be vacuous on every prefix
        // stopped before A's walk ends, letting B stop early and win any
        // instance regardless of the formula.
        if (!premise.valid()) premise = ltlf::f_true();
        if (!conclusion.valid()) conclusion = ltlf::f_false();
        p.mapping.conjuncts.emplace_back(premise, conclusion);
    }
    p.mapping.conjuncts.emplace_back(ltlf::f_true(), ltlf::atom("pB_star"));
    instance::validate_instance(p);
    return p;
}

} // namespace mbsd::qbf
