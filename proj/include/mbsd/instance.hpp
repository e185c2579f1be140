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

#ifndef MBSD_INSTANCE_HPP
#define MBSD_INSTANCE_HPP

#include "mbsd/domain.hpp"
#include "mbsd/ltlf.hpp"

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mbsd::instance {

enum class StopAgent { A, B };
enum class MappingKind { PointWise, Target, General };

// What agent B must mimic. PointWise: always (phi_i -> psi_i), conjunct
// sides temporal-free over the respective agent's propositions. Target:
// (eventually phi_i) -> (eventually psi_i), same side discipline. General:
// an arbitrary formula over the joint propositions.
struct MappingSpec {
    MappingKind kind = MappingKind::General;
    std::vector<std::pair<ltlf::Formula, ltlf::Formula>> conjuncts; // PointWise/Target
    ltlf::Formula formula;                                          // General
};

struct MbsdInstance {
    domains::DynamicDomain domain_a;
    domains::DynamicDomain domain_b;
    MappingSpec mapping;
    StopAgent stop_agent = StopAgent::A;
};

// The single formula the mapping denotes (conjunction built in conjunct
// order, right-nested).
ltlf::Formula mapping_formula(const MappingSpec& m);

// Full invariant check: valid domains, disjoint proposition sets, kind vs.
// stop-agent pairing (PointWise => stop A, Target => stop B), temporal-free
// side-scoped conjuncts with k >= 1, General formula over the joint
// propositions. Throws input_error.
void validate_instance(const MbsdInstance& p);

// Instance JSON:
//   {"domain_a": <domain object or file path>, "domain_b": ...,
//    "mapping": {"kind": "pointwise"|"target"|"general",
//                "conjuncts": [{"phi": str, "psi": str}, ...] | "formula": str},
//    "stop_agent": "A"|"B"}
// Relative domain paths resolve against base_dir. decode validates.
MbsdInstance decode_instance(const nlohmann::json& doc, const std::string& base_dir = ".");
MbsdInstance load_instance(const std::string& path);
nlohmann::json encode_instance(const MbsdInstance& p); // domains inlined

} // namespace mbsd::instance

#endif
