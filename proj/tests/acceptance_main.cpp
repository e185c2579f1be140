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

// Acceptance suite: ten end-to-end checks over the whole toolkit, one
// pass/fail line each. Exit status 0 iff every check passes. The CLI-facing
// checks expect MBSD_CLI to name the mbsd binary.

#include "mbsd/automata.hpp"
#include "mbsd/domain.hpp"
#include "mbsd/errors.hpp"
#include "mbsd/games.hpp"
#include "mbsd/instance.hpp"
#include "mbsd/ltlf.hpp"
#include "mbsd/oracle.hpp"
#include "mbsd/qbf.hpp"
#include "mbsd/reductions.hpp"

#include "test_util.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace automata = mbsd::automata;
namespace domains = mbsd::domains;
namespace games = mbsd::games;
namespace instance = mbsd::instance;
namespace ltlf = mbsd::ltlf;
namespace oracle = mbsd::oracle;
namespace qbf = mbsd::qbf;
namespace reductions = mbsd::reductions;

struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw check_failure(msg);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/* ---------------- CLI plumbing ---------------- */

std::filesystem::path work_dir() {
    const std::filesystem::path dir = std::filesystem::current_path() / "acceptance_tmp";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const char* cli = std::getenv("MBSD_CLI");
    require(cli != nullptr, "MBSD_CLI must point at the mbsd binary");
    const std::filesystem::path cap = work_dir() / ("stdout_" + std::to_string(counter++));
    const std::string cmd =
        "\"" + std::string(cli) + "\" " + args + " > \"" + cap.string() + "\" 2> /dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (status != -1 && WIFEXITED(status)) r.code = WEXITSTATUS(status);
    r.out = slurp(cap);
    return r;
}

/* ---------------- the ten checks ---------------- */

// 500 random formulas, every word of length 1..5 over each formula's own
// propositions: the compiled automaton and direct trace evaluation agree.
void check_dfa_language() {
    const auto t0 = std::chrono::steady_clock::now();
    testutil::rng_t rng(101);
    const std::vector<std::string> pool = {"p", "q", "r"};
    automata::DfaCaps caps;
    caps.max_states = 512; // a few depth-4 draws blow up syntactically; redraw those
    int rejected = 0;
    for (int i = 0; i < 500; ++i) {
        for (;;) {
            const std::vector<std::string> drawn(pool.begin(),
                                                 pool.begin() + 1 + testutil::draw(rng, 3));
            const ltlf::Formula f = testutil::random_formula(rng, drawn, 4);
            std::vector<std::string> props = ltlf::propositions(f);
            if (props.empty()) props.push_back("p");
            automata::Dfa d;
            try {
                d = automata::build_dfa(f, props, caps);
            } catch (const mbsd::cap_error&) {
                require(++rejected <= 100, "too many residual-cap rejections");
                continue;
            }
            testutil::for_all_words(testutil::all_letters(props), 5, [&](const ltlf::Trace& w) {
                if (automata::accepts(d, w) != ltlf::eval_trace(f, w, 0))
                    throw check_failure("language mismatch for " + ltlf::to_string(f));
            });
            break;
        }
    }
    require(seconds_since(t0) < 60.0, "formula sweep exceeded 60 s");
}

// 200 random arenas, both objectives: the attractor solvers and the bounded
// min-max search reach the same verdict at the positional-determinacy depth.
void check_solver_determinacy() {
    const auto t0 = std::chrono::steady_clock::now();
    testutil::rng_t rng(202);
    for (int i = 0; i < 200; ++i) {
        const bool reach = (i % 2) == 1;
        const auto rg = testutil::random_game(rng, 30, reach);
        const auto strat = reach ? games::solve_reachability(rg.arena, rg.objective.goal)
                                 : games::solve_safety(rg.arena, rg.objective.goal);
        const auto verdict = oracle::minmax_decide(
            rg.arena, rg.objective, 2 * (rg.arena.num_p1() + rg.arena.num_p2()));
        require(!verdict.bounded, "min-max verdict unexpectedly bounded");
        require(strat.has_value() == (verdict.winner == oracle::Winner::P2),
                "solver disagrees with min-max on arena " + std::to_string(i));
    }
    require(seconds_since(t0) < 60.0, "arena sweep exceeded 60 s");
}

// 100 random point-wise instances: the dedicated reduction and the general
// automaton reduction decide identically, and every strategy verifies.
void check_pointwise_vs_general() {
    testutil::rng_t rng(303);
    for (int i = 0; i < 100; ++i) {
        const instance::MbsdInstance p = testutil::random_pointwise_instance(rng, 5, 2);
        const auto pw = reductions::solve_mbsd(p, reductions::SolveMode::Pointwise);
        const auto gen = reductions::solve_mbsd(p, reductions::SolveMode::General);
        require(pw.realizable == gen.realizable,
                "point-wise and general verdicts differ on instance " + std::to_string(i));
        if (pw.strategy) require(reductions::verify_mbsd(p, *pw.strategy),
                                 "point-wise strategy failed verification");
        if (gen.strategy) require(reductions::verify_mbsd(p, *gen.strategy),
                                  "general strategy failed verification");
    }
}

// 100 random target instances: memory-bit reduction, general reduction and
// the brute-force oracle (horizon 2*|S|*|T|*2k) agree.
void check_target_vs_general_vs_oracle() {
    testutil::rng_t rng(404);
    for (int i = 0; i < 100; ++i) {
        const instance::MbsdInstance p = testutil::random_target_instance(rng, 4, 2, false);
        const auto tg = reductions::solve_mbsd(p, reductions::SolveMode::Target);
        const auto gen = reductions::solve_mbsd(p, reductions::SolveMode::General);
        const std::size_t horizon = 2 * p.domain_a.num_states() * p.domain_b.num_states() *
                                    2 * p.mapping.conjuncts.size();
        const bool byo = oracle::oracle_mbsd(p, horizon);
        require(tg.realizable == gen.realizable && gen.realizable == byo,
                "target/general/oracle verdicts differ on instance " + std::to_string(i));
    }
}

// 100 random tree-like target instances: the fast path agrees with the
// memory-bit reduction; with k = 8 it stays within 2*|S|*|T| nodes while the
// memory-bit arena is only 4^k-bounded.
void check_tree_fast_path() {
    testutil::rng_t rng(505);
    for (int i = 0; i < 100; ++i) {
        const instance::MbsdInstance p = testutil::random_target_instance(rng, 6, 3, true);
        const auto tree = reductions::solve_mbsd(p, reductions::SolveMode::Tree);
        const auto tg = reductions::solve_mbsd(p, reductions::SolveMode::Target);
        require(tree.realizable == tg.realizable,
                "tree fast path disagrees on instance " + std::to_string(i));
    }

    reductions::ReductionCaps caps;
    caps.node_budget = 50000000; // 2*|S|*|T|*4^8 can exceed the default cap
    for (int i = 0; i < 5; ++i) {
        instance::MbsdInstance p;
        p.domain_a = testutil::random_domain(rng, 4, 2, true, "a_");
        p.domain_b = testutil::random_domain(rng, 4, 2, true, "b_");
        p.mapping.kind = instance::MappingKind::Target;
        p.stop_agent = instance::StopAgent::B;
        for (int c = 0; c < 8; ++c)
            p.mapping.conjuncts.emplace_back(
                testutil::random_propositional(rng, p.domain_a.props, 2),
                testutil::random_propositional(rng, p.domain_b.props, 2));
        instance::validate_instance(p);

        const std::size_t st = p.domain_a.num_states() * p.domain_b.num_states();
        const auto tree = reductions::solve_mbsd(p, reductions::SolveMode::Tree, caps);
        const auto tg = reductions::solve_mbsd(p, reductions::SolveMode::Target, caps);
        require(tree.realizable == tg.realizable, "k=8 tree probe disagrees");
        require(tree.stats.arena_nodes <= 2 * st, "tree arena exceeds 2*|S|*|T|");
        const std::size_t pow4k = std::size_t(1) << 16; // 4^8
        require(tg.stats.arena_nodes <= 2 * st * pow4k,
                "memory-bit arena exceeds its 4^k bound");
    }
}

// every constructed target arena stays within 2*|S|*|T|*4^k reachable nodes
void check_target_arena_bound() {
    testutil::rng_t rng(606);
    for (int i = 0; i < 100; ++i) {
        const instance::MbsdInstance p = testutil::random_target_instance(rng, 5, 3, false);
        const auto tg = reductions::solve_mbsd(p, reductions::SolveMode::Target);
        std::size_t bound = 2 * p.domain_a.num_states() * p.domain_b.num_states();
        for (std::size_t c = 0; c < p.mapping.conjuncts.size(); ++c) bound *= 4;
        require(tg.stats.arena_nodes <= bound,
                "target arena exceeds 2*|S|*|T|*4^k on instance " + std::to_string(i));
    }
}

// 200 random CNF-1 formulas: gadget realizability equals brute-force truth;
// the worked running example is false, so its instance exits 1 via the CLI.
void check_qbf_gadget() {
    testutil::rng_t rng(707);
    for (int i = 0; i < 200; ++i) {
        const qbf::QbfCnf1 q = testutil::random_cnf1(rng, 3, 4);
        const bool truth = qbf::eval_qbf(q);
        const auto solved = reductions::solve_mbsd(qbf::qbf1_to_mbsd(q));
        require(truth == solved.realizable,
                "gadget verdict differs from brute force on formula " + std::to_string(i));
    }

    const std::filesystem::path qdimacs = work_dir() / "example.qdimacs";
    spit(qdimacs,
         "c running example\n"
         "p cnf 4 3\n"
         "a 1 0\ne 2 0\na 3 0\ne 4 0\n"
         "1 2 4 0\n-3 -2 0\n2 -4 0\n");
    const std::filesystem::path inst = work_dir() / "example_inst.json";
    require(run_cli("gen qbf --input " + qdimacs.string() + " --out " + inst.string()).code == 0,
            "gen qbf failed on the worked example");
    require(run_cli("solve --instance " + inst.string()).code == 1,
            "worked example should be unrealizable (exit 1)");
}

// 200 random prenex CNF formulas: the CNF-1 transform preserves truth
void check_cnf1_transform() {
    testutil::rng_t rng(808);
    for (int i = 0; i < 200; ++i) {
        const qbf::QbfCnf q = testutil::random_qbf(rng, 6, 5);
        const qbf::QbfCnf1 q1 = qbf::cnf_to_cnf1(q);
        require(qbf::is_cnf1(q1), "transform output is not CNF-1");
        require(qbf::eval_qbf(q) == qbf::eval_qbf(q1),
                "transform changed the truth value of formula " + std::to_string(i));
    }
}

// 3x3 grid, one ghost: solve under 30 s, cross-check with the general
// reduction, verify the strategy, and run 1000 seeded random walks of 30
// steps without ever placing the dodger on the ghost's cell.
void check_pacman() {
    const domains::PacmanInstance pac = domains::gen_pacman(3, 1, {});
    instance::MbsdInstance p;
    p.domain_a = pac.ghosts;
    p.domain_b = pac.pacman;
    p.mapping.kind = instance::MappingKind::PointWise;
    p.mapping.conjuncts = pac.conjuncts;
    p.stop_agent = instance::StopAgent::A;
    instance::validate_instance(p);

    const auto t0 = std::chrono::steady_clock::now();
    const auto solved = reductions::solve_mbsd(p);
    require(seconds_since(t0) < 30.0, "solver exceeded 30 s");
    require(solved.realizable, "expected the 3x3 benchmark to be realizable");
    require(reductions::solve_mbsd(p, reductions::SolveMode::General).realizable,
            "general-mode cross-check disagrees");
    require(reductions::verify_mbsd(p, *solved.strategy), "strategy failed verification");

    auto cell = [](const ltlf::TraceLetter& l, const std::string& prefix) -> std::string {
        for (const auto& prop : l.props())
            if (prop.rfind(prefix, 0) == 0) return prop.substr(prefix.size());
        return "?";
    };
    for (int seed = 0; seed < 1000; ++seed) {
        reductions::Adversary adv;
        adv.seed = static_cast<std::uint64_t>(seed);
        const reductions::SimResult sim = reductions::simulate(p, *solved.strategy, adv, 30);
        require(sim.satisfied, "simulation violated the mapping (seed " +
                                   std::to_string(seed) + ")");
        for (std::size_t j = 0; j < sim.trace.a_states.size(); ++j) {
            const std::string ghost = cell(p.domain_a.labels[sim.trace.a_states[j]], "bk_");
            const std::string dodger = cell(p.domain_b.labels[sim.trace.b_states[j]], "p_");
            require(ghost != dodger, "collision at step " + std::to_string(j) + " (seed " +
                                         std::to_string(seed) + ")");
        }
    }
}

// every CLI subcommand re-run with the same inputs produces identical stdout
void check_cli_determinism() {
    const std::filesystem::path dir = work_dir();

    const domains::PacmanInstance pac = domains::gen_pacman(2, 1, {});
    instance::MbsdInstance p;
    p.domain_a = pac.ghosts;
    p.domain_b = pac.pacman;
    p.mapping.kind = instance::MappingKind::PointWise;
    p.mapping.conjuncts = pac.conjuncts;
    p.stop_agent = instance::StopAgent::A;
    const std::filesystem::path inst = dir / "det_inst.json";
    spit(inst, instance::encode_instance(p).dump(2) + "\n");

    const std::filesystem::path strat = dir / "det_strat.json";
    require(run_cli("solve --instance " + inst.string() + " --strategy-out " + strat.string())
                    .code == 0,
            "determinism fixture failed to solve");
    const std::filesystem::path qdimacs = dir / "det.qdimacs";
    spit(qdimacs, "p cnf 2 1\na 1 0\ne 2 0\n-1 2 0\n");

    const std::vector<std::string> commands = {
        "solve --instance " + inst.string(),
        "verify --instance " + inst.string() + " --strategy " + strat.string(),
        "simulate --instance " + inst.string() + " --strategy " + strat.string() +
            " --seed 42 --steps 6",
        "ltlf2dfa --formula \"F (p & X q)\" --props p,q --minimize",
        "gen qbf --input " + qdimacs.string() + " --out " + (dir / "det_qbf.json").string(),
        "gen pacman --n 2 --ghosts 1 --out-prefix " + (dir / "det_pac").string(),
        "gen random --states 6 --props 2 --seed 13 --out " + (dir / "det_dom.json").string(),
        "oracle --instance " + inst.string(),
    };
    for (const auto& cmd : commands) {
        const RunResult a = run_cli(cmd);
        const RunResult b = run_cli(cmd);
        require(a.code == b.code && a.out == b.out,
                "non-deterministic output from: " + cmd.substr(0, cmd.find(' ')));
    }
}

} // namespace

int main() {
    struct Check {
        const char* label;
        std::function<void()> body;
    };
    const std::vector<Check> checks = {
        {"formula compilation matches trace evaluation (500 formulas)", check_dfa_language},
        {"attractor solvers agree with bounded min-max (200 arenas)", check_solver_determinacy},
        {"point-wise and general reductions agree, strategies verify (100 instances)",
         check_pointwise_vs_general},
        {"target, general, and oracle verdicts agree (100 instances)",
         check_target_vs_general_vs_oracle},
        {"tree fast path matches the memory-bit reduction (100 instances + k=8 probe)",
         check_tree_fast_path},
        {"target arenas respect the 2*|S|*|T|*4^k bound (100 instances)",
         check_target_arena_bound},
        {"CNF-1 gadget realizability equals brute-force truth (200 formulas + example)",
         check_qbf_gadget},
        {"CNF to CNF-1 transform preserves truth (200 formulas)", check_cnf1_transform},
        {"3x3 ghost-avoidance benchmark solves, verifies, survives 1000 walks", check_pacman},
        {"CLI reruns are byte-identical (all subcommands)", check_cli_determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string verdict = "pass";
        std::string detail;
        try {
            checks[i].body();
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = std::string(" -- ") + e.what();
            ++failed;
        }
        std::printf("%s %2zu/%zu %s [%.2f s]%s\n", verdict.c_str(), i + 1, checks.size(),
                    checks[i].label, seconds_since(t0), detail.c_str());
        std::fflush(stdout);
    }
    if (failed) std::printf("acceptance: %d of %zu checks failed\n", failed, checks.size());
    else std::printf("acceptance: all %zu checks passed\n", checks.size());
    return failed ? 1 : 0;
}
