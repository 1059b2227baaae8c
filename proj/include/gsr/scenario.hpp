#pragma once

// Scenario files in, reports and trace CSVs out.
//
// Scenario JSON:
//   {
//     "potential": "product" | "additive" | "stable",
//     "initial_state": {"x1": 100, "x2": 100},
//     "orders": [{"side": "buy", "qty": 10, "limit": 2.0, "owner": 1}, ...],
//     "miner": {"strategy": "none" | "sandwich" | "impossibility" | "custom-orders",
//               "target": 0, "n": 3, "orders": [...]},
//     "rule": "greedy" | "arbitrary",
//     "ordering": [2, 0, 1],
//     "tie_break": "lowest-index" | "highest-quantity" | "random",
//     "origin_tie": "either" | "buy-only",
//     "seed": 0
//   }
// A null or absent "limit" is a market order.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsr/adversary.hpp"
#include "gsr/game.hpp"
#include "gsr/sequencing.hpp"
#include "gsr/types.hpp"

#include "json.hpp"

namespace gsr {

struct ScenarioOrder {
    Order order;
    AgentId owner = 1;

    friend bool operator==(const ScenarioOrder&, const ScenarioOrder&) = default;
};

enum class MinerStrategy : std::uint8_t { None, Sandwich, Impossibility, CustomOrders };

std::string_view to_string(MinerStrategy s) noexcept;

struct MinerPlan {
    MinerStrategy strategy = MinerStrategy::None;
    std::optional<std::size_t> target;  // sandwich: index into the user orders
    int n = 3;                          // impossibility block size
    std::vector<Order> orders;          // custom-orders

    friend bool operator==(const MinerPlan&, const MinerPlan&) = default;
};

struct Scenario {
    Potential potential = kProduct;
    PoolState initial;
    std::vector<ScenarioOrder> orders;
    MinerPlan miner;
    RuleKind rule = RuleKind::Greedy;
    std::optional<std::vector<std::size_t>> ordering;
    TieBreak::Kind tie_break = TieBreak::Kind::LowestIndex;
    OriginTie origin_tie = OriginTie::EitherSide;
    std::uint64_t seed = 0;

    GreedyOptions greedy_options() const { return GreedyOptions{TieBreak{tie_break, seed}, origin_tie, 0.0}; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws Error(ParseError) on malformed or invalid input.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::ordered_json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

struct ScenarioRun {
    Scenario scenario;
    Potential pot;
    PoolState x0;
    Block block;
    Outcome outcome;
    std::optional<SandwichPlan> sandwich;
    std::optional<ExploitSelection> exploit;
    // Set when the miner strategy does not apply, e.g. a sandwich on an additive pool.
    std::optional<std::string> strategy_skipped;
};

ScenarioRun run_scenario(const Scenario& s);

nlohmann::ordered_json make_report(const ScenarioRun& run);

// Fixed header: t,side,qty,limit,owner,status,payment,x1,x2
void write_trace_csv(std::ostream& os, const ScenarioRun& run);
// Reserve trajectory including t = 0: t,x1,x2,spot_price
void write_series_csv(std::ostream& os, const ScenarioRun& run);

// A trace to verify: initial state plus the orders in execution order.
struct TraceFile {
    Potential pot = kProduct;
    PoolState x0;
    std::vector<Order> orders;
};

// Accepts a report (orders under "trace") or a bare {"orders": [...]} list.
TraceFile trace_from_json(const nlohmann::json& j);

bool verify_trace(const TraceFile& trace, OriginTie origin_tie = OriginTie::EitherSide);

std::string format_number(double v);

}  // namespace gsr
