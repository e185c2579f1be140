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

// mbsd: command-line front end. One subcommand per pipeline stage; JSON on
// stdout, diagnostics on stderr. Exit codes: 0 realizable/accepted/true,
// 1 unrealizable/rejected/false, 2 usage or input error, 3 cap exceeded.

#include "mbsd/automata.hpp"
#include "mbsd/domain.hpp"
#include "mbsd/errors.hpp"
#include "mbsd/instance.hpp"
#include "mbsd/ltlf.hpp"
#include "mbsd/oracle.hpp"
#include "mbsd/qbf.hpp"
#include "mbsd/reductions.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using mbsd::cap_error;
using mbsd::input_error;
namespace domains = mbsd::domains;
namespace instance = mbsd::instance;
namespace reductions = mbsd::reductions;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file '" + path + "'");
    out << content;
}

nlohmann::json parse_json_file(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error("file '" + path + "' is not valid JSON: " + e.what());
    }
}

void emit(const nlohmann::json& doc) { std::cout << doc.dump(2) << "\n"; }

reductions::MbsdStrategy load_strategy(const std::string& path) {
    try {
        return reductions::decode_strategy(parse_json_file(path));
    } catch (const input_error& e) {
        throw input_error(std::string(e.what()) + " (file '" + path + "')");
    }
}

reductions::SolveMode parse_mode(const std::string& m) {
    if (m == "auto") return reductions::SolveMode::Auto;
    if (m == "pointwise") return reductions::SolveMode::Pointwise;
    if (m == "target") return reductions::SolveMode::Target;
    if (m == "tree") return reductions::SolveMode::Tree;
    if (m == "general") return reductions::SolveMode::General;
    throw input_error("--mode: unknown mode '" + m + "'");
}

std::vector<domains::GridCell> load_walls(const std::string& path) {
    const nlohmann::json doc = parse_json_file(path);
    if (!doc.is_array()) throw input_error("--walls: '" + path + "' must hold a JSON array");
    std::vector<domains::GridCell> walls;
    for (const auto& w : doc) {
        if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() ||
            !w[1].is_number_integer())
            throw input_error("--walls: each wall must be an [x, y] pair of integers");
        walls.push_back({w[0].get<int>(), w[1].get<int>()});
    }
    return walls;
}

int cmd_solve(const std::string& inst_path, const std::string& mode, const std::string& out_path,
              bool stats, std::uint32_t k_cap, std::size_t budget) {
    const instance::MbsdInstance p = instance::load_instance(inst_path);
    reductions::ReductionCaps caps;
    caps.k_cap = k_cap;
    caps.node_budget = budget;
    const reductions::SolveResult r = reductions::solve_mbsd(p, parse_mode(mode), caps);

    nlohmann::json doc;
    doc["realizable"] = r.realizable;
    doc["mode"] = r.stats.mode_used;
    doc["arena_nodes"] = r.stats.arena_nodes;
    doc["arena_edges"] = r.stats.arena_edges;
    doc["dfa_states"] = r.stats.dfa_states;
    if (stats) doc["elapsed_ms"] = r.stats.elapsed_ms;
    if (!out_path.empty() && r.strategy) {
        write_file(out_path, reductions::encode_strategy(*r.strategy).dump(2) + "\n");
        doc["strategy"] = out_path;
    }
    emit(doc);
    return r.realizable ? 0 : 1;
}

int cmd_verify(const std::string& inst_path, const std::string& strat_path, std::size_t budget) {
    const instance::MbsdInstance p = instance::load_instance(inst_path);
    const reductions::MbsdStrategy s = load_strategy(strat_path);
    const bool ok = reductions::verify_mbsd(p, s, budget);
    nlohmann::json doc;
    doc["verified"] = ok;
    emit(doc);
    return ok ? 0 : 1;
}

int cmd_simulate(const std::string& inst_path, const std::string& strat_path,
                 const std::string& script_path, std::uint64_t seed, std::size_t steps) {
    const instance::MbsdInstance p = instance::load_instance(inst_path);
    const reductions::MbsdStrategy s = load_strategy(strat_path);

    reductions::Adversary adv;
    std::size_t max_steps = steps;
    if (!script_path.empty()) {
        const nlohmann::json doc = parse_json_file(script_path);
        if (!doc.is_array())
            throw input_error("--script: '" + script_path + "' must hold a JSON array of ids");
        adv.scripted = true;
        for (const auto& id : doc) {
            if (!id.is_string())
                throw input_error("--script: entries must be agent-A state ids (strings)");
            adv.script.push_back(id.get<std::string>());
        }
        max_steps = adv.script.size();
    } else {
        adv.seed = seed;
    }

    const reductions::SimResult r = reductions::simulate(p, s, adv, max_steps);
    nlohmann::json doc;
    auto ids = [](const domains::DynamicDomain& d, const std::vector<std::uint32_t>& xs) {
        nlohmann::json a = nlohmann::json::array();
        for (std::uint32_t x : xs) a.push_back(d.ids[x]);
        return a;
    };
    doc["trace_a"] = ids(p.domain_a, r.trace.a_states);
    doc["trace_b"] = ids(p.domain_b, r.trace.b_states);
    doc["stopped"] = r.stopped;
    doc["satisfied"] = r.satisfied;
    emit(doc);
    return r.satisfied ? 0 : 1;
}

int cmd_ltlf2dfa(const std::string& formula, const std::string& props_csv, bool minimize,
                 const std::string& dot_path) {
    const mbsd::ltlf::Formula f = mbsd::ltlf::parse(formula);
    std::vector<mbsd::ltlf::Proposition> props;
    std::string item;
    std::istringstream ss(props_csv);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) props.push_back(item);
    }
    mbsd::automata::Dfa d = mbsd::automata::build_dfa(f, props);
    if (minimize) d = mbsd::automata::minimize(d);
    if (!dot_path.empty()) write_file(dot_path, mbsd::automata::to_dot(d));
    std::cout << mbsd::automata::to_json(d);
    return 0;
}

int cmd_gen_qbf(const std::string& in_path, bool to_cnf1, const std::string& out_path) {
    mbsd::qbf::QbfCnf q = mbsd::qbf::parse_qdimacs(read_file(in_path));
    if (to_cnf1) q = mbsd::qbf::cnf_to_cnf1(q);
    const instance::MbsdInstance p = mbsd::qbf::qbf1_to_mbsd(q);
    write_file(out_path, instance::encode_instance(p).dump(2) + "\n");

    nlohmann::json doc;
    doc["out"] = out_path;
    doc["variables"] = q.prefix.size();
    doc["clauses"] = q.clauses.size();
    doc["conjuncts"] = p.mapping.conjuncts.size();
    emit(doc);
    return 0;
}

int cmd_gen_pacman(int n, int ghosts, const std::string& walls_path,
                   const std::string& out_prefix) {
    std::vector<domains::GridCell> walls;
    if (!walls_path.empty()) walls = load_walls(walls_path);
    const domains::PacmanInstance pac = domains::gen_pacman(n, ghosts, walls);

    instance::MbsdInstance p;
    p.domain_a = pac.ghosts;
    p.domain_b = pac.pacman;
    p.mapping.kind = instance::MappingKind::PointWise;
    p.mapping.conjuncts = pac.conjuncts;
    p.stop_agent = instance::StopAgent::A;
    instance::validate_instance(p);

    const std::string out = out_prefix + "_instance.json";
    write_file(out, instance::encode_instance(p).dump(2) + "\n");

    nlohmann::json doc;
    doc["instance"] = out;
    doc["ghost_states"] = pac.ghosts.num_states();
    doc["pacman_states"] = pac.pacman.num_states();
    doc["conjuncts"] = pac.conjuncts.size();
    emit(doc);
    return 0;
}

int cmd_gen_random(std::uint32_t states, std::uint32_t props, std::uint32_t branching, bool tree,
                   std::uint64_t seed, const std::string& out_path) {
    const domains::DynamicDomain d = domains::gen_random(states, branching, props, tree, seed);
    write_file(out_path, domains::encode(d).dump(2) + "\n");
    nlohmann::json doc;
    doc["out"] = out_path;
    doc["states"] = d.num_states();
    doc["props"] = d.props.size();
    doc["tree"] = tree;
    emit(doc);
    return 0;
}

int cmd_oracle(const std::string& inst_path, std::size_t horizon) {
    const instance::MbsdInstance p = instance::load_instance(inst_path);
    if (horizon == 0 && p.mapping.kind == instance::MappingKind::General) {
        // default for general mappings: 2*|SxT|*|Q| with Q the residual
        // automaton of the mapping formula over both domains' propositions
        const mbsd::ltlf::Formula f = instance::mapping_formula(p.mapping);
        std::vector<mbsd::ltlf::Proposition> props = p.domain_a.props;
        props.insert(props.end(), p.domain_b.props.begin(), p.domain_b.props.end());
        const mbsd::automata::Dfa d = mbsd::automata::build_dfa(f, props);
        horizon = 2 * p.domain_a.num_states() * p.domain_b.num_states() * d.num_states();
    }
    const bool r = mbsd::oracle::oracle_mbsd(p, horizon);
    nlohmann::json doc;
    doc["realizable"] = r;
    emit(doc);
    return r ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthesis toolkit for mimicking behaviors in separated domains"};
    app.require_subcommand(1);
    int code = 0;

    // solve
    auto* solve = app.add_subcommand("solve", "Decide an instance and extract a strategy");
    std::string so_instance, so_mode = "auto", so_out;
    bool so_stats = false;
    std::uint32_t so_kcap = 12;
    std::size_t so_budget = 2000000;
    solve->add_option("--instance", so_instance, "Instance JSON file")->required();
    solve->add_option("--mode", so_mode, "auto|pointwise|target|tree|general");
    solve->add_option("--strategy-out", so_out, "Write the synthesized strategy here");
    solve->add_flag("--stats", so_stats, "Include timing in the report");
    solve->add_option("--k-cap", so_kcap, "Conjunct cap for the memory-bit reduction");
    solve->add_option("--budget", so_budget, "Arena node budget");
    solve->callback([&] { code = cmd_solve(so_instance, so_mode, so_out, so_stats, so_kcap,
                                           so_budget); });

    // verify
    auto* verify = app.add_subcommand("verify", "Check a strategy against an instance");
    std::string ve_instance, ve_strategy;
    std::size_t ve_budget = 2000000;
    verify->add_option("--instance", ve_instance, "Instance JSON file")->required();
    verify->add_option("--strategy", ve_strategy, "Strategy JSON file")->required();
    verify->add_option("--budget", ve_budget, "Arena node budget");
    verify->callback([&] { code = cmd_verify(ve_instance, ve_strategy, ve_budget); });

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run a strategy against an adversary");
    std::string si_instance, si_strategy, si_script;
    std::uint64_t si_seed = 0;
    std::size_t si_steps = 0;
    sim->add_option("--instance", si_instance, "Instance JSON file")->required();
    sim->add_option("--strategy", si_strategy, "Strategy JSON file")->required();
    auto* script_opt = sim->add_option("--script", si_script, "JSON array of agent-A moves");
    auto* seed_opt = sim->add_option("--seed", si_seed, "Random-walk adversary seed");
    auto* steps_opt = sim->add_option("--steps", si_steps, "Number of adversary moves");
    script_opt->excludes(seed_opt)->excludes(steps_opt);
    seed_opt->needs(steps_opt);
    sim->callback([&] {
        if (si_script.empty() && steps_opt->count() == 0)
            throw input_error("simulate: pass either --script or --seed/--steps");
        code = cmd_simulate(si_instance, si_strategy, si_script, si_seed, si_steps);
    });

    // ltlf2dfa
    auto* l2d = app.add_subcommand("ltlf2dfa", "Compile a formula to a DFA");
    std::string ld_formula, ld_props, ld_dot;
    bool ld_min = false;
    l2d->add_option("--formula", ld_formula, "LTLf formula")->required();
    l2d->add_option("--props", ld_props, "Comma-separated alphabet")->required();
    l2d->add_flag("--minimize", ld_min, "Minimize the result");
    l2d->add_option("--dot", ld_dot, "Also write Graphviz output here");
    l2d->callback([&] { code = cmd_ltlf2dfa(ld_formula, ld_props, ld_min, ld_dot); });

    // gen
    auto* gen = app.add_subcommand("gen", "Generators");
    gen->require_subcommand(1);

    auto* gqbf = gen->add_subcommand("qbf", "QDIMACS file to MBSD instance");
    std::string gq_in, gq_out;
    bool gq_cnf1 = false;
    gqbf->add_option("--input", gq_in, "QDIMACS file")->required();
    gqbf->add_flag("--to-cnf1", gq_cnf1, "Apply the CNF-1 transform first");
    gqbf->add_option("--out", gq_out, "Instance JSON output path")->required();
    gqbf->callback([&] { code = cmd_gen_qbf(gq_in, gq_cnf1, gq_out); });

    auto* gpac = gen->add_subcommand("pacman", "Ghost-avoidance grid benchmark");
    int gp_n = 3, gp_ghosts = 1;
    std::string gp_walls, gp_prefix;
    gpac->add_option("--n", gp_n, "Grid side length")->required();
    gpac->add_option("--ghosts", gp_ghosts, "Number of ghosts")->required();
    gpac->add_option("--walls", gp_walls, "JSON array of [x,y] wall cells");
    gpac->add_option("--out-prefix", gp_prefix, "Output path prefix")->required();
    gpac->callback([&] { code = cmd_gen_pacman(gp_n, gp_ghosts, gp_walls, gp_prefix); });

    auto* grnd = gen->add_subcommand("random", "Random serial domain");
    std::uint32_t gr_states = 0, gr_props = 0, gr_branching = 2;
    bool gr_tree = false;
    std::uint64_t gr_seed = 0;
    std::string gr_out;
    grnd->add_option("--states", gr_states, "State count")->required();
    grnd->add_option("--props", gr_props, "Proposition count")->required();
    grnd->add_option("--branching", gr_branching, "Max out-degree (default 2)");
    grnd->add_flag("--tree", gr_tree, "Tree-like shape (leaf self-loops)");
    grnd->add_option("--seed", gr_seed, "Generator seed")->required();
    grnd->add_option("--out", gr_out, "Domain JSON output path")->required();
    grnd->callback([&] { code = cmd_gen_random(gr_states, gr_props, gr_branching, gr_tree,
                                               gr_seed, gr_out); });

    // oracle
    auto* orc = app.add_subcommand("oracle", "Brute-force reference decision");
    std::string or_instance;
    std::size_t or_horizon = 0;
    orc->add_option("--instance", or_instance, "Instance JSON file")->required();
    orc->add_option("--horizon", or_horizon, "Joint-step bound (0 = automatic)");
    orc->callback([&] { code = cmd_oracle(or_instance, or_horizon); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return code;
}
