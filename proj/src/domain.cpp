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
#include <map>
#include <set>

namespace mbsd::domains {

std::uint32_t DynamicDomain::state_index(const std::string& id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw input_error("domain: unknown state id '" + id + "'");
    return static_cast<std::uint32_t>(it - ids.begin());
}

bool DynamicDomain::has_edge(std::uint32_t from, std::uint32_t to) const {
    if (from >= succ.size()) return false;
    return std::binary_search(succ[from].begin(), succ[from].end(), to);
}

std::vector<std::string> validation_errors(const DynamicDomain& d) {
    std::vector<std::string> errs;
    const std::size_t n = d.num_states();
    if (n == 0) {
        errs.push_back("domain has no states");
        return errs;
    }
    if (d.init >= n) errs.push_back("init index " + std::to_string(d.init) + " out of range");
    if (d.labels.size() != n) errs.push_back("label table size differs from state count");
    if (d.succ.size() != n) errs.push_back("transition table size differs from state count");
    for (std::size_t s = 0; s < n && s < d.succ.size(); ++s) {
        if (d.succ[s].empty())
            errs.push_back("state '" + d.ids[s] + "' is non-serial (no successor)");
        for (std::uint32_t t : d.succ[s]) {
            if (t >= n)
                errs.push_back("state '" + d.ids[s] + "' has a dangling transition to index " +
                               std::to_string(t));
        }
    }
    for (std::size_t s = 0; s < n && s < d.labels.size(); ++s) {
        for (const auto& p : d.labels[s].props()) {
            if (!std::binary_search(d.props.begin(), d.props.end(), p))
                errs.push_back("state '" + d.ids[s] + "' label uses '" + p +
                               "' outside the proposition set");
        }
    }
    return errs;
}

void validate(const DynamicDomain& d) {
    auto errs = validation_errors(d);
    if (errs.empty()) return;
    std::string msg = "domain: invalid";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw input_error(msg);
}

bool is_trace(const DynamicDomain& d, const std::vector<std::uint32_t>& seq) {
    if (seq.empty()) return false;
    for (std::uint32_t s : seq)
        if (s >= d.num_states())
            throw input_error("domain: unknown state index " + std::to_string(s));
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!d.has_edge(seq[i], seq[i + 1])) return false;
    return true;
}

bool is_trace(const DynamicDomain& d, const std::vector<std::string>& seq) {
    std::vector<std::uint32_t> ix;
    ix.reserve(seq.size());
    for (const auto& id : seq) ix.push_back(d.state_index(id));
    return is_trace(d, ix);
}

bool is_tree_like(const DynamicDomain& d) {
    const std::size_t n = d.num_states();
    std::vector<std::uint32_t> indeg(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        bool self = false;
        for (std::uint32_t t : d.succ[s]) {
            if (t == static_cast<std::uint32_t>(s)) self = true;
            else ++indeg[t];
        }
        if (self && d.succ[s].size() != 1) return false; // self-loop must be the only exit
    }
    if (indeg[d.init] != 0) return false;
    for (std::size_t s = 0; s < n; ++s)
        if (s != d.init && indeg[s] > 1) return false;
    // reachability from init (self-loops cannot help)
    std::vector<bool> seen(n, false);
    std::vector<std::uint32_t> stack{d.init};
    seen[d.init] = true;
    while (!stack.empty()) {
        std::uint32_t s = stack.back();
        stack.pop_back();
        for (std::uint32_t t : d.succ[s])
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

/* ---------------- JSON codec ---------------- */

DynamicDomain decode(const nlohmann::json& doc) {
    if (!doc.is_object()) throw input_error("domain: document is not a JSON object");
    for (const char* key : {"props", "states", "init", "transitions"})
        if (!doc.contains(key)) throw input_error(std::string("domain: missing field \"") + key + "\"");

    DynamicDomain d;
    if (!doc["props"].is_array()) throw input_error("domain: \"props\" must be an array");
    for (const auto& p : doc["props"]) {
        if (!p.is_string() || !ltlf::is_valid_proposition(p.get<std::string>()))
            throw input_error("domain: invalid proposition " + p.dump());
        d.props.push_back(p.get<std::string>());
    }
    std::sort(d.props.begin(), d.props.end());
    if (std::adjacent_find(d.props.begin(), d.props.end()) != d.props.end())
        throw input_error("domain: duplicate proposition");

    if (!doc["states"].is_array() || doc["states"].empty())
        throw input_error("domain: \"states\" must be a nonempty array");
    std::map<std::string, std::uint32_t> index;
    for (const auto& st : doc["states"]) {
        if (!st.is_object() || !st.contains("id") || !st["id"].is_string())
            throw input_error("domain: state entry missing string \"id\"");
        std::string id = st["id"].get<std::string>();
        if (id.empty()) throw input_error("domain: empty state id");
        if (!index.emplace(id, static_cast<std::uint32_t>(d.ids.size())).second)
            throw input_error("domain: duplicate state id '" + id + "'");
        d.ids.push_back(id);
        std::vector<ltlf::Proposition> label;
        if (st.contains("label")) {
            if (!st["label"].is_array())
                throw input_error("domain: state '" + id + "' label must be an array");
            for (const auto& p : st["label"]) {
                if (!p.is_string())
                    throw input_error("domain: state '" + id + "' label entry " + p.dump());
                label.push_back(p.get<std::string>());
            }
        }
        d.labels.emplace_back(std::move(label));
    }

    if (!doc["init"].is_string()) throw input_error("domain: \"init\" must be a state id string");
    {
        auto it = index.find(doc["init"].get<std::string>());
        if (it == index.end())
            throw input_error("domain: init state '" + doc["init"].get<std::string>() +
                              "' is not declared");
        d.init = it->second;
    }

    if (!doc["transitions"].is_array())
        throw input_error("domain: \"transitions\" must be an array");
    d.succ.resize(d.ids.size());
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& tr : doc["transitions"]) {
        if (!tr.is_array() || tr.size() != 2 || !tr[0].is_string() || !tr[1].is_string())
            throw input_error("domain: transition entry must be a [from, to] id pair, got " +
                              tr.dump());
        auto fit = index.find(tr[0].get<std::string>());
        auto tit = index.find(tr[1].get<std::string>());
        if (fit == index.end() || tit == index.end())
            throw input_error("domain: transition references unknown state in " + tr.dump());
        if (!seen.emplace(fit->second, tit->second).second)
            throw input_error("domain: duplicate transition " + tr.dump());
        d.succ[fit->second].push_back(tit->second);
    }
    for (auto& row : d.succ) std::sort(row.begin(), row.end());

    validate(d);
    return d;
}

nlohmann::json encode(const DynamicDomain& d) {
    nlohmann::json doc;
    doc["props"] = d.props;
    nlohmann::json states = nlohmann::json::array();
    for (std::size_t s = 0; s < d.num_states(); ++s) {
        nlohmann::json st;
        st["id"] = d.ids[s];
        st["label"] = d.labels[s].props();
        states.push_back(std::move(st));
    }
    doc["states"] = std::move(states);
    doc["init"] = d.ids[d.init];
    nlohmann::json trans = nlohmann::json::array();
    for (std::size_t s = 0; s < d.num_states(); ++s)
        for (std::uint32_t t : d.succ[s])
            trans.push_back(nlohmann::json::array({d.ids[s], d.ids[t]}));
    doc["transitions"] = std::move(trans);
    return doc;
}

} // namespace mbsd::domains
