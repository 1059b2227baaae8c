#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>

#include "gsr/error.hpp"
#include "gsr/scenario.hpp"

using namespace gsr;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios{GSR_SCENARIO_DIR};

ScenarioRun run_file(const std::string& name) { return run_scenario(load_scenario((kScenarios / name).string())); }

// Utilities rebuilt from the emitted trace alone.
std::map<AgentId, std::pair<double, double>> utilities_from_trace(const nlohmann::ordered_json& report) {
    std::map<AgentId, std::pair<double, double>> out;
    double x1 = report["initial_state"]["x1"].get<double>();
    double x2 = report["initial_state"]["x2"].get<double>();
    for (const auto& step : report["trace"]) {
        const double n1 = step["x1"].get<double>();
        const double n2 = step["x2"].get<double>();
        auto& u = out[step["owner"].get<AgentId>()];
        u.first += x1 - n1;
        u.second += x2 - n2;
        x1 = n1;
        x2 = n2;
    }
    return out;
}

const nlohmann::ordered_json* utility_of(const nlohmann::ordered_json& report, AgentId agent) {
    for (const auto& u : report["utilities"]) {
        if (u["agent"].get<AgentId>() == agent) return &u;
    }
    return nullptr;
}

ErrorCode parse_code(const std::string& text) {
    try {
        scenario_from_json(json::parse(text));
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Violation;
}

}  // namespace

TEST_CASE("scenario files round-trip") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
        CAPTURE(entry.path().string());
        const Scenario s = load_scenario(entry.path().string());
        const Scenario back = scenario_from_json(json::parse(scenario_to_json(s).dump()));
        CHECK(back == s);
        ++count;
    }
    CHECK(count >= 5);
}

TEST_CASE("reports are deterministic and self-consistent") {
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
        CAPTURE(entry.path().string());
        const Scenario s = load_scenario(entry.path().string());
        const auto a = make_report(run_scenario(s));
        const auto b = make_report(run_scenario(s));
        CHECK(a.dump() == b.dump());
        // Round-trip through text so the check sees what a reader of the file sees.
        const auto report = nlohmann::ordered_json::parse(a.dump());
        for (const auto& [agent, u] : utilities_from_trace(report)) {
            const auto* reported = utility_of(report, agent);
            REQUIRE(reported != nullptr);
            CHECK(std::abs((*reported)["d1"].get<double>() - u.first) <= 1e-9);
            CHECK(std::abs((*reported)["d2"].get<double>() - u.second) <= 1e-9);
        }
        for (const auto& check : report["checks"]) CHECK(check["violations"].get<int>() == 0);
    }
}

TEST_CASE("figure scenarios") {
    for (const char* name : {"figure_greedy.json", "figure_greedy_sell1.json"}) {
        CAPTURE(name);
        const auto report = make_report(run_file(name));
        CHECK(report["verifier_accepts"].get<bool>());
        CHECK(report["tail_same_side"].get<bool>());
        const auto* miner = utility_of(report, kMiner);
        REQUIRE(miner != nullptr);
        CHECK(std::abs((*miner)["d1"].get<double>()) <= 1e-12);
        CHECK((*miner)["d2"].get<double>() > 1e-9);
    }
}

TEST_CASE("sandwich scenarios") {
    const auto report = make_report(run_file("sandwich.json"));
    const auto* miner = utility_of(report, kMiner);
    REQUIRE(miner != nullptr);
    CHECK(std::abs((*miner)["d2"].get<double>() - 8.888889) <= 1e-6);
    CHECK_FALSE(report["verifier_accepts"].get<bool>());

    const auto greedy = make_report(run_file("sandwich_greedy.json"));
    CHECK(greedy["verifier_accepts"].get<bool>());
    CHECK(std::abs((*utility_of(greedy, kMiner))["d2"].get<double>()) <= 1e-9);

    const auto additive = make_report(run_file("sandwich_additive.json"));
    CHECK(additive["strategy_skipped"] == "NotLiquidityPreserving");
    CHECK((*utility_of(additive, kMiner))["d2"].get<double>() == 0.0);
}

TEST_CASE("empty scenario") {
    const ScenarioRun run = run_file("empty.json");
    const auto report = make_report(run);
    CHECK(report["trace"].empty());
    CHECK(report["final_state"] == report["initial_state"]);
    std::ostringstream csv;
    write_trace_csv(csv, run);
    CHECK(csv.str() == "t,side,qty,limit,owner,status,payment,x1,x2\n");
}

TEST_CASE("csv numbers round-trip exactly") {
    const ScenarioRun run = run_file("stable_mixed.json");
    std::ostringstream csv;
    write_trace_csv(csv, run);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    std::size_t t = 0;
    while (std::getline(in, line)) {
        const std::string x2 = line.substr(line.rfind(',') + 1);
        CHECK(std::strtod(x2.c_str(), nullptr) == run.outcome.states.at(t).x2);
        ++t;
    }
    CHECK(t == run.outcome.size());
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(kInf) == "inf");
}

TEST_CASE("reports verify as traces") {
    const auto report = make_report(run_file("stable_mixed.json"));
    CHECK(verify_trace(trace_from_json(json::parse(report.dump()))));
    const auto sandwich = make_report(run_file("sandwich.json"));
    CHECK_FALSE(verify_trace(trace_from_json(json::parse(sandwich.dump()))));
}

TEST_CASE("malformed scenarios") {
    CHECK(parse_code(R"({"initial_state": {"x1": 1, "x2": 1}})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"potential": "cubic", "initial_state": {"x1": 1, "x2": 1}})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"potential": "product", "initial_state": {"x1": -1, "x2": 1}})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"potential": "product", "initial_state": {"x1": 1, "x2": 1},
                         "orders": [{"side": "hold", "qty": 1}]})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"potential": "product", "initial_state": {"x1": 1, "x2": 1},
                         "orders": [{"side": "buy", "qty": 0}]})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"potential": "product", "initial_state": {"x1": 1, "x2": 1},
                         "orders": [{"side": "buy", "qty": 1, "owner": 0}]})") == ErrorCode::ParseError);
    CHECK(parse_code(R"({"potential": "product", "initial_state": {"x1": 1, "x2": 1}, "rule": "fifo"})") ==
          ErrorCode::ParseError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), Error);
}
