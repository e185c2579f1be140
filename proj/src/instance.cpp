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

#include "mbsd/instance.hpp"

#include "mbsd/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace mbsd::instance {

ltlf::Formula mapping_formula(const MappingSpec& m) {
    if (m.kind == MappingKind::General) return m.formula;
    std::vector<ltlf::Formula> parts;
    for (const auto& [phi, psi] : m.conjuncts) {
        if (m.kind == MappingKind::PointWise)
            parts.push_back(ltlf::mk_globally(ltlf::mk_implies(phi, psi)));
        else
            parts.push_back(ltlf::mk_implies(ltlf::mk_eventually(phi), ltlf::mk_eventually(psi)));
    }
    if (parts.empty()) throw input_error("mapping: no conjuncts");
    ltlf::Formula acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = ltlf::mk_and(parts[i], acc);
    return acc;
}

namespace {

void check_side(const ltlf::Formula& f, const std::vector<ltlf::Proposition>& props,
                const char* side, std::size_t i) {
    if (!ltlf::is_temporal_free(f))
        throw input_error("instance: conjunct " + std::to_string(i + 1) + " " + side +
                          " side must be temporal-free: " + ltlf::to_string(f));
    for (const auto& p : ltlf::propositions(f)) {
        if (!std::binary_search(props.begin(), props.end(), p))
            throw input_error("instance: conjunct " + std::to_string(i + 1) + " " + side +
                              " side uses '" + p + "' outside that agent's propositions");
    }
}

} // namespace

void validate_instance(const MbsdInstance& p) {
    domains::validate(p.domain_a);
    domains::validate(p.domain_b);
    std::vector<ltlf::Proposition> shared;
    std::set_intersection(p.domain_a.props.begin(), p.domain_a.props.end(),
                          p.domain_b.props.begin(), p.domain_b.props.end(),
                          std::back_inserter(shared));
    if (!shared.empty())
        throw input_error("instance: proposition '" + shared.front() +
                          "' appears in both agents' domains");

    switch (p.mapping.kind) {
        case MappingKind::PointWise:
            if (p.stop_agent != StopAgent::A)
                throw input_error("instance: point-wise mappings require stop_agent A");
            break;
        case MappingKind::Target:
            if (p.stop_agent != StopAgent::B)
                throw input_error("instance: target mappings require stop_agent B");
            break;
        case MappingKind::General: break;
    }

    if (p.mapping.kind == MappingKind::General) {
        if (!p.mapping.formula.valid()) throw input_error("instance: missing mapping formula");
        for (const auto& pr : ltlf::propositions(p.mapping.formula)) {
            bool in_a = std::binary_search(p.domain_a.props.begin(), p.domain_a.props.end(), pr);
            bool in_b = std::binary_search(p.domain_b.props.begin(), p.domain_b.props.end(), pr);
            if (!in_a && !in_b)
                throw input_error("instance: formula proposition '" + pr +
                                  "' belongs to neither agent");
        }
    } else {
        if (p.mapping.conjuncts.empty())
            throw input_error("instance: mapping needs at least one conjunct");
        for (std::size_t i = 0; i < p.mapping.conjuncts.size(); ++i) {
            check_side(p.mapping.conjuncts[i].first, p.domain_a.props, "phi", i);
            check_side(p.mapping.conjuncts[i].second, p.domain_b.props, "psi", i);
        }
    }
}

namespace {

domains::DynamicDomain decode_domain_field(const nlohmann::json& field, const std::string& key,
                                           const std::string& base_dir) {
    if (field.is_object()) return domains::decode(field);
    if (field.is_string()) {
        std::filesystem::path p(field.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        std::ifstream in(p);
        if (!in) throw input_error("instance: cannot open domain file '" + p.string() + "'");
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw input_error("instance: bad JSON in '" + p.string() + "': " + e.what());
        }
        return domains::decode(doc);
    }
    throw input_error("instance: \"" + key + "\" must be a domain object or a file path");
}

} // namespace

MbsdInstance decode_instance(const nlohmann::json& doc, const std::string& base_dir) {
    if (!doc.is_object()) throw input_error("instance: document is not a JSON object");
    for (const char* key : {"domain_a", "domain_b", "mapping", "stop_agent"})
        if (!doc.contains(key))
            throw input_error(std::string("instance: missing field \"") + key + "\"");

    MbsdInstance p;
    p.domain_a = decode_domain_field(doc["domain_a"], "domain_a", base_dir);
    p.domain_b = decode_domain_field(doc["domain_b"], "domain_b", base_dir);

    const auto& m = doc["mapping"];
    if (!m.is_object() || !m.contains("kind") || !m["kind"].is_string())
        throw input_error("instance: \"mapping\" must carry a string \"kind\"");
    std::string kind = m["kind"].get<std::string>();
    if (kind == "pointwise") p.mapping.kind = MappingKind::PointWise;
    else if (kind == "target") p.mapping.kind = MappingKind::Target;
    else if (kind == "general") p.mapping.kind = MappingKind::General;
    else throw input_error("instance: unknown mapping kind '" + kind + "'");

    if (p.mapping.kind == MappingKind::General) {
        if (!m.contains("formula") || !m["formula"].is_string())
            throw input_error("instance: general mapping needs a \"formula\" string");
        p.mapping.formula = ltlf::parse(m["formula"].get<std::string>());
    } else {
        if (!m.contains("conjuncts") || !m["conjuncts"].is_array())
            throw input_error("instance: mapping needs a \"conjuncts\" array");
        for (const auto& c : m["conjuncts"]) {
            if (!c.is_object() || !c.contains("phi") || !c.contains("psi") ||
                !c["phi"].is_string() || !c["psi"].is_string())
                throw input_error("instance: conjunct entries need string \"phi\" and \"psi\"");
            p.mapping.conjuncts.emplace_back(ltlf::parse(c["phi"].get<std::string>()),
                                             ltlf::parse(c["psi"].get<std::string>()));
        }
    }

    if (!doc["stop_agent"].is_string())
        throw input_error("instance: \"stop_agent\" must be \"A\" or \"B\"");
    std::string sa = doc["stop_agent"].get<std::string>();
    if (sa == "A") p.stop_agent = StopAgent::A;
    else if (sa == "B") p.stop_agent = StopAgent::B;
    else throw input_error("instance: \"stop_agent\" must be \"A\" or \"B\"");

    validate_instance(p);
    return p;
}

MbsdInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("instance: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("instance: bad JSON in '" + path + "': " + e.what());
    }
    return decode_instance(doc, std::filesystem::path(path).parent_path().string());
}

nlohmann::json encode_instance(const MbsdInstance& p) {
    nlohmann::json doc;
    doc["domain_a"] = domains::encode(p.domain_a);
    doc["domain_b"] = domains::encode(p.domain_b);
    nlohmann::json m;
    if (p.mapping.kind == MappingKind::General) {
        m["kind"] = "general";
        m["formula"] = ltlf::to_string(p.mapping.formula);
    } else {
        m["kind"] = p.mapping.kind == MappingKind::PointWise ? "pointwise" : "target";
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& [phi, psi] : p.mapping.conjuncts) {
            nlohmann::json c;
            c["phi"] = ltlf::to_string(phi);
            c["psi"] = ltlf::to_string(psi);
            cs.push_back(std::move(c));
        }
        m["conjuncts"] = std::move(cs);
    }
    doc["mapping"] = std::move(m);
    doc["stop_agent"] = p.stop_agent == StopAgent::A ? "A" : "B";
    return doc;
}

} // namespace mbsd::instance
