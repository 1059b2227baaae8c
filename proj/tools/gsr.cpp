// gsr: run scenarios, verify traces, plan attacks and run the property suites.
//
// Exit codes: 0 success, 1 verification or suite failure, 2 bad input.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsr/adversary.hpp"
#include "gsr/error.hpp"
#include "gsr/exchange.hpp"
#include "gsr/scenario.hpp"
#include "gsr/suites.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw gsr::Error(gsr::ErrorCode::ParseError, "cannot write '" + path.string() + "'");
    out << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_run(const std::string& scenario_path, const std::string& out_dir, const std::string& tie_break,
            std::optional<std::uint64_t> seed, bool series) {
    gsr::Scenario s = gsr::load_scenario(scenario_path);
    if (!tie_break.empty()) s.tie_break = gsr::parse_tie_break(tie_break);
    if (seed) s.seed = *seed;
    const gsr::ScenarioRun run = gsr::run_scenario(s);
    const ordered_json report = gsr::make_report(run);

    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "report.json", dump(report));
    {
        std::ofstream csv(fs::path(out_dir) / "trace.csv");
        gsr::write_trace_csv(csv, run);
    }
    if (series) {
        std::ofstream csv(fs::path(out_dir) / "series.csv");
        gsr::write_series_csv(csv, run);
    }

    std::cout << "steps " << run.outcome.size() << ", verifier " << (report["verifier_accepts"] ? "accepts" : "rejects")
              << "\n";
    for (const auto& u : report["utilities"]) {
        std::cout << "agent " << u["agent"].get<unsigned>() << ": d1 " << gsr::format_number(u["d1"].get<double>())
                  << ", d2 " << gsr::format_number(u["d2"].get<double>()) << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& path, const std::string& origin_tie) {
    std::ifstream in(path);
    if (!in) throw gsr::Error(gsr::ErrorCode::ParseError, "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw gsr::Error(gsr::ErrorCode::ParseError, e.what());
    }
    const gsr::TraceFile trace = gsr::trace_from_json(j);
    const gsr::OriginTie tie = origin_tie == "buy-only" ? gsr::OriginTie::BuyOnly : gsr::OriginTie::EitherSide;
    const bool ok = gsr::verify_trace(trace, tie);
    std::cout << (ok ? "valid" : "invalid") << "\n";
    return ok ? 0 : kExitFail;
}

int cmd_sandwich(const std::string& potential, double x1, double x2, double qty, double limit,
                 const std::string& out_path) {
    const gsr::Potential pot{gsr::parse_potential_kind(potential)};
    const gsr::PoolState x{x1, x2};
    const gsr::Order user = gsr::make_buy(qty, limit);
    ordered_json j;
    j["potential"] = potential;
    j["initial_state"] = {{"x1", x1}, {"x2", x2}};
    j["user"] = {{"side", "buy"}, {"qty", qty}, {"limit", limit}};
    try {
        const gsr::SandwichPlan plan = gsr::plan_sandwich(pot, x, user);
        const gsr::Game game = gsr::sandwich_game(pot, x, user, plan.w);
        const gsr::UtilityVector miner = gsr::agent_utility(game.outcome, game.block, gsr::kMiner);
        j["w"] = plan.w;
        j["miner_qty"] = plan.miner_qty;
        j["user_payment"] = plan.user_payment;
        j["predicted_profit"] = plan.predicted_profit;
        j["miner_utility"] = {{"d1", miner.d1}, {"d2", miner.d2}};
        std::cout << "front Buy(" << gsr::format_number(plan.miner_qty) << "), back Sell("
                  << gsr::format_number(plan.miner_qty) << ")\n"
                  << "user pays " << gsr::format_number(plan.user_payment) << "\n"
                  << "miner utility (" << gsr::format_number(miner.d1) << ", " << gsr::format_number(miner.d2)
                  << ")\n";
    } catch (const gsr::Error& e) {
        if (e.code() != gsr::ErrorCode::NotLiquidityPreserving) throw;
        j["error"] = gsr::to_string(e.code());
        std::cout << "no sandwich: " << e.what() << "\n";
    }
    if (!out_path.empty()) write_text(out_path, dump(j));
    return 0;
}

int cmd_impossibility(int n, const std::string& out_path) {
    const gsr::ImpossibilityInstance inst = gsr::impossibility_block(n);
    std::size_t exploited = 0;
    const auto patterns = gsr::side_patterns(n);
    ordered_json rows = ordered_json::array();
    for (const auto& pattern : patterns) {
        std::string sides;
        for (gsr::Side s : pattern) sides += s == gsr::Side::Buy ? 'B' : 'S';
        const gsr::ExecutionOrdering ordering = gsr::pattern_ordering(inst.block, pattern);
        gsr::ExploitSelection sel;
        try {
            sel = gsr::select_exploit(gsr::kProduct, inst.x0, inst.block, ordering);
        } catch (const gsr::Error& e) {
            if (e.code() != gsr::ErrorCode::CaseTwoReached) throw;
            std::cout << sides << ": no buy with two sells two units below it\n";
            rows.push_back({{"pattern", sides}, {"case_two", true}, {"exploited", false}});
            continue;
        }
        const gsr::Block owned = gsr::assign_exploit_ownership(inst.block, sel);
        const gsr::Outcome outcome = gsr::execute_ordering(gsr::kProduct, inst.x0, owned, ordering);
        const gsr::UtilityVector u = gsr::agent_utility(outcome, owned, gsr::kMiner);
        const bool ok = gsr::is_profitable_risk_free(u);
        exploited += ok ? 1 : 0;
        rows.push_back({{"pattern", sides}, {"case_two", false}, {"k", sel.k}, {"d1", u.d1}, {"d2", u.d2},
                        {"exploited", ok}});
    }
    std::cout << "n=" << n << ": " << exploited << "/" << patterns.size() << " patterns exploitable\n";
    if (!out_path.empty()) write_text(out_path, dump(ordered_json{{"n", n}, {"patterns", rows}}));
    return exploited == patterns.size() ? 0 : kExitFail;
}

int cmd_suite(const std::string& name, std::uint64_t trials, std::uint64_t seed, bool serial,
              const std::string& out_path) {
    if (!gsr::is_suite_name(name)) throw gsr::Error(gsr::ErrorCode::ParseError, "unknown suite '" + name + "'");
    gsr::SuiteConfig cfg{trials, seed, serial ? gsr::Execution::Serial : gsr::Execution::Parallel};
    const auto tallies = gsr::run_suite(name, cfg);
    bool ok = true;
    ordered_json rows = ordered_json::array();
    for (const gsr::InvariantTally& t : tallies) {
        ok = ok && t.violations == 0;
        std::printf("%-14s %-26s trials %8llu  violations %llu\n", t.suite.c_str(), t.name.c_str(),
                    static_cast<unsigned long long>(t.trials), static_cast<unsigned long long>(t.violations));
        rows.push_back({{"suite", t.suite}, {"invariant", t.name}, {"trials", t.trials},
                        {"violations", t.violations}, {"first_violation", t.first_violation}});
    }
    std::printf("%s\n", ok ? "all invariants hold" : "violations found");
    if (!out_path.empty()) write_text(out_path, dump(ordered_json{{"seed", seed}, {"tallies", rows}}));
    return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy sequencing rule simulator"};
    app.require_subcommand(1);

    std::string scenario, out, tie_break, origin_tie = "either";
    std::optional<std::uint64_t> seed;
    bool series = false;
    auto* run = app.add_subcommand("run", "Execute a scenario and write report.json and trace.csv");
    run->add_option("--scenario", scenario, "Scenario JSON file")->required();
    run->add_option("--out", out, "Output directory")->required();
    run->add_option("--tie-break", tie_break, "lowest-index, highest-quantity or random");
    run->add_option("--seed", seed, "Seed for the random tie-break");
    run->add_flag("--series", series, "Also write series.csv with the reserve trajectory");

    std::string trace;
    auto* verify = app.add_subcommand("verify", "Check a trace against the greedy rule");
    verify->add_option("trace", trace, "Report or trace JSON file")->required();
    verify->add_option("--origin-tie", origin_tie, "either or buy-only")
        ->check(CLI::IsMember({"either", "buy-only"}));

    auto* attack = app.add_subcommand("attack", "Plan a miner attack");
    attack->require_subcommand(1);
    std::string potential = "product", attack_out;
    double x1 = 100, x2 = 100, qty = 10, limit = 2;
    auto* sandwich = attack->add_subcommand("sandwich", "Sandwich a user's buy");
    sandwich->add_option("--potential", potential)->check(CLI::IsMember({"product", "additive", "stable"}));
    sandwich->add_option("--x1", x1);
    sandwich->add_option("--x2", x2);
    sandwich->add_option("--qty", qty);
    sandwich->add_option("--limit", limit);
    sandwich->add_option("--out", attack_out, "Write the plan as JSON");
    int n = 3;
    auto* impossibility = attack->add_subcommand("impossibility", "Exploit every ordering of the n-block");
    impossibility->add_option("--n", n)->check(CLI::Range(3, 12));
    impossibility->add_option("--out", attack_out, "Write per-pattern results as JSON");

    std::string suite_name;
    std::uint64_t trials = 10000, suite_seed = 1;
    bool serial = false;
    auto* suite = app.add_subcommand("suite", "Run randomized property suites");
    suite->add_option("name", suite_name, "pricing, duality, greedy, impossibility, sandwich or all")->required();
    suite->add_option("--trials", trials);
    suite->add_option("--seed", suite_seed);
    suite->add_flag("--serial", serial, "Use the single-threaded reference loop");
    suite->add_option("--out", out, "Write tallies as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*run) return cmd_run(scenario, out, tie_break, seed, series);
        if (*verify) return cmd_verify(trace, origin_tie);
        if (*sandwich) return cmd_sandwich(potential, x1, x2, qty, limit, attack_out);
        if (*impossibility) return cmd_impossibility(n, attack_out);
        if (*suite) return cmd_suite(suite_name, trials, suite_seed, serial, out);
    } catch (const gsr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
