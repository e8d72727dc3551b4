// Command-line front end: run one policy over a scenario (optionally sweeping
// seeds concurrently), compare policies side by side, solve tiny instances
// exactly, or dump the expanded graph.
//
// Exit codes: 0 success, 2 bad command line, 3 scenario load/validation
// failure, 4 a produced deployment violated feasibility, 5 the exact solver
// exceeded its search budget.

#include <cstdint>
#include <exception>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sagin/baselines.hpp"
#include "sagin/deploy.hpp"
#include "sagin/matchgame.hpp"
#include "sagin/oracle.hpp"
#include "sagin/report.hpp"
#include "sagin/rteg.hpp"
#include "sagin/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitLoad = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitBudget = 5;

std::string file_stem(const std::string& path) {
    const size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

bool write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return false;
    }
    out << text;
    return out.good();
}

struct SeedRun {
    sagin::EngineResult result;
};

/// Instantiate the scenario for one seed (applying task generation when the
/// scenario asks for it) and run the given policy on it.
sagin::EngineResult run_one(const sagin::Scenario& base, const std::string& scenario_name,
                            const sagin::MatchPolicy& policy, std::uint64_t seed,
                            bool collect_trace) {
    sagin::Scenario s = sagin::with_generated_tasks(base, seed);
    sagin::RtegGraph g = sagin::build_rteg(s);
    sagin::EngineOptions opt;
    opt.scenario_name = scenario_name;
    opt.seed = seed;
    opt.collect_trace = collect_trace;
    return sagin::run_engine(s, g, policy, opt);
}

/// Sweep seeds base..base+count-1 concurrently; results come back in seed order.
std::vector<sagin::EngineResult> run_sweep(const sagin::Scenario& base,
                                           const std::string& scenario_name,
                                           const sagin::MatchPolicy& policy,
                                           std::uint64_t seed_base, int seed_count,
                                           bool collect_trace) {
    std::vector<std::future<sagin::EngineResult>> futures;
    futures.reserve(seed_count);
    for (int i = 0; i < seed_count; ++i)
        futures.push_back(std::async(std::launch::async, run_one, std::cref(base),
                                     scenario_name, policy, seed_base + i, collect_trace));
    std::vector<sagin::EngineResult> out;
    out.reserve(seed_count);
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Service-chain deployment simulator for layered aerial networks"};
    app.require_subcommand(1);

    // ---- run ----
    std::string run_scenario, run_algorithm = "mg-rteg", run_output, run_format = "csv";
    std::string run_trace;
    std::optional<std::uint64_t> run_seed;
    int run_seeds = 1;
    sagin::OracleBudget oracle_budget;
    CLI::App* run = app.add_subcommand("run", "Run one algorithm over a scenario");
    run->add_option("scenario", run_scenario, "Scenario JSON file")->required();
    run->add_option("--algorithm", run_algorithm, "mg-rteg, aaso, fcfs or oracle")
        ->check(CLI::IsMember({"mg-rteg", "aaso", "fcfs", "oracle"}));
    run->add_option("--seed", run_seed, "Base seed (default: the scenario's rng_seed)");
    run->add_option("--seeds", run_seeds, "Number of consecutive seeds to sweep")
        ->check(CLI::PositiveNumber);
    run->add_option("--output,-o", run_output, "Output file (default: stdout)");
    run->add_option("--format", run_format, "Report format (run only)")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--trace", run_trace, "Write the event trace to this file (one seed only)");
    run->add_option("--oracle-max-tasks", oracle_budget.max_tasks, "Exact solver task cap");
    run->add_option("--oracle-max-nodes", oracle_budget.max_nodes, "Exact solver node cap");
    run->add_option("--oracle-max-slots", oracle_budget.max_slots, "Exact solver slot cap");
    run->add_option("--oracle-max-enumerations", oracle_budget.max_enumerations,
                    "Exact solver search-step cap");

    // ---- compare ----
    std::string cmp_scenario, cmp_output;
    std::vector<std::string> cmp_algorithms{"mg-rteg", "aaso", "fcfs"};
    std::optional<std::uint64_t> cmp_seed;
    int cmp_seeds = 1;
    CLI::App* cmp = app.add_subcommand("compare", "Run several algorithms and tabulate means");
    cmp->add_option("scenario", cmp_scenario, "Scenario JSON file")->required();
    cmp->add_option("--algorithms", cmp_algorithms, "Algorithms to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"mg-rteg", "aaso", "fcfs"}));
    cmp->add_option("--seed", cmp_seed, "Base seed (default: the scenario's rng_seed)");
    cmp->add_option("--seeds", cmp_seeds, "Number of consecutive seeds to sweep")
        ->check(CLI::PositiveNumber);
    cmp->add_option("--output,-o", cmp_output, "Output file (default: stdout)");

    // ---- dump-graph ----
    std::string dump_scenario, dump_output;
    CLI::App* dump = app.add_subcommand("dump-graph", "Write the expanded graph edge list");
    dump->add_option("scenario", dump_scenario, "Scenario JSON file")->required();
    dump->add_option("--output,-o", dump_output, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) {
            if (!run_trace.empty() && run_seeds != 1) {
                std::cerr << "error: --trace requires --seeds 1\n";
                return kExitUsage;
            }
            sagin::Scenario base = sagin::load_scenario(run_scenario);
            const std::string name = file_stem(run_scenario);
            const std::uint64_t seed0 = run_seed.value_or(base.rng_seed);

            if (run_algorithm == "oracle") {
                if (run_seeds != 1) {
                    std::cerr << "error: the exact solver runs one seed at a time\n";
                    return kExitUsage;
                }
                sagin::Scenario s = sagin::with_generated_tasks(base, seed0);
                sagin::RtegGraph g = sagin::build_rteg(s);
                sagin::OracleResult res = sagin::solve_exact(s, g, oracle_budget);
                const auto violations = sagin::check_feasibility(s, g, res.witness);
                std::string text = "{\n  \"algorithm\": \"oracle\",\n  \"scenario\": \"" +
                                   name + "\",\n  \"seed\": " + std::to_string(seed0) +
                                   ",\n  \"status\": \"" +
                                   (res.status == sagin::OracleStatus::Optimal
                                        ? "optimal"
                                        : "budget_exceeded") +
                                   "\",\n  \"optimal_q\": " + std::to_string(res.optimal_q) +
                                   ",\n  \"enumerations\": " +
                                   std::to_string(res.enumerations) +
                                   ",\n  \"violations\": " +
                                   std::to_string(violations.size()) + "\n}\n";
                if (!write_output(run_output, text)) return kExitLoad;
                if (!violations.empty()) {
                    std::cerr << sagin::violation_report(violations);
                    return kExitInfeasible;
                }
                if (res.status == sagin::OracleStatus::BudgetExceeded) return kExitBudget;
                return kExitOk;
            }

            const auto policy = sagin::policy_by_name(run_algorithm);
            auto results = run_sweep(base, name, *policy, seed0, run_seeds,
                                     !run_trace.empty());
            std::vector<sagin::SimReport> reports;
            reports.reserve(results.size());
            bool infeasible = false;
            for (const auto& r : results) {
                reports.push_back(r.report);
                if (r.report.violation_count > 0) infeasible = true;
            }
            const std::string text = run_format == "json"
                                         ? sagin::reports_to_json(reports)
                                         : sagin::reports_to_csv(reports);
            if (!write_output(run_output, text)) return kExitLoad;
            if (!run_trace.empty() && !write_output(run_trace, results.front().trace))
                return kExitLoad;
            return infeasible ? kExitInfeasible : kExitOk;
        }

        if (cmp->parsed()) {
            sagin::Scenario base = sagin::load_scenario(cmp_scenario);
            const std::string name = file_stem(cmp_scenario);
            const std::uint64_t seed0 = cmp_seed.value_or(base.rng_seed);
            std::vector<sagin::SimReport> reports;
            bool infeasible = false;
            for (const std::string& alg : cmp_algorithms) {
                const auto policy = sagin::policy_by_name(alg);
                auto results = run_sweep(base, name, *policy, seed0, cmp_seeds, false);
                for (const auto& r : results) {
                    reports.push_back(r.report);
                    if (r.report.violation_count > 0) infeasible = true;
                }
            }
            const sagin::Comparison c = sagin::compare(reports);
            if (!write_output(cmp_output, sagin::comparison_to_csv(c))) return kExitLoad;
            return infeasible ? kExitInfeasible : kExitOk;
        }

        if (dump->parsed()) {
            sagin::Scenario s = sagin::load_scenario(dump_scenario);
            sagin::RtegGraph g = sagin::build_rteg(s);
            if (!write_output(dump_output, sagin::dump_edge_list(g))) return kExitLoad;
            return kExitOk;
        }
    } catch (const sagin::ValidationError& e) {
        std::cerr << "scenario validation failed: " << e.what() << "\n";
        return kExitLoad;
    } catch (const sagin::ParseError& e) {
        std::cerr << "input parse failed: " << e.what() << "\n";
        return kExitLoad;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLoad;
    }
    return kExitOk;
}
