#pragma once

// The trading game between users and a miner: traces, utilities, execution
// quality and the core/tail split of an outcome.

#include <optional>
#include <vector>

#include "gsr/sequencing.hpp"
#include "gsr/types.hpp"

namespace gsr {

// The executed trace of an ordering. states[t] is the pool after ordering[t] runs.
struct Outcome {
    PoolState x0;
    ExecutionOrdering ordering;
    std::vector<PoolState> states;
    std::vector<ExecResult> results;

    std::size_t size() const noexcept { return states.size(); }
    // Pool before step t (0-based), i.e. X_{t}; state_before(0) == x0.
    PoolState state_before(std::size_t t) const { return t == 0 ? x0 : states.at(t - 1); }
    PoolState final_state() const { return states.empty() ? x0 : states.back(); }
};

Outcome execute_ordering(Potential pot, PoolState x0, const Block& block, const ExecutionOrdering& ordering);

enum class RuleKind : std::uint8_t { Greedy, Arbitrary };

std::string_view to_string(RuleKind rule) noexcept;
RuleKind parse_rule(std::string_view name);

struct GameSetup {
    RuleKind rule = RuleKind::Greedy;
    GreedyOptions greedy{};
    // Miner's choice under the arbitrary rule; identity when absent.
    std::optional<std::vector<std::size_t>> permutation;
};

struct Game {
    Block block;
    Outcome outcome;
};

// Users' orders come first in the block, then the miner's (owned by agent 0).
Game run_game(Potential pot, PoolState x0, std::span<const Order> user_orders,
              std::span<const AgentId> user_ids, std::span<const Order> miner_orders,
              const GameSetup& setup = {});

// Token deltas held by an agent (the negative of what the pool gained from it).
struct UtilityVector {
    double d1 = 0.0;
    double d2 = 0.0;

    UtilityVector& operator+=(const UtilityVector& o) noexcept {
        d1 += o.d1;
        d2 += o.d2;
        return *this;
    }
};

// Agent-side deltas of step t of the outcome (zero when aborted).
UtilityVector step_utility(const Outcome& outcome, std::size_t t);

// Censored users listed in `roster` get (0, 0). Throws UnknownAgent for an agent
// that is neither the miner, an owner in the block, nor on the roster.
UtilityVector agent_utility(const Outcome& outcome, const Block& block, AgentId agent,
                            std::span<const AgentId> roster = {});

bool is_risk_free(UtilityVector u, double tol = kTol.cmp) noexcept;
bool is_profitable_risk_free(UtilityVector u, double tol = kTol.cmp) noexcept;

// `a` is at least as good as `b` in both tokens.
bool dominates(UtilityVector a, UtilityVector b, double tol = kTol.cmp) noexcept;

// Execution-quality order: `order` fares at least as well at `x` as at `reference`.
bool better_execution(Potential pot, const Order& order, PoolState x, PoolState reference,
                      const Tolerances& tol = kTol);

struct CoreTail {
    std::vector<std::size_t> core;  // block indices, in execution order
    std::vector<std::size_t> tail;

    bool tail_single_side(const Block& block) const;
};

CoreTail core_tail_decompose(Potential pot, const Block& block, const Outcome& outcome);

enum class GreedyCase : std::uint8_t { Indifference, Isolation };

std::string_view to_string(GreedyCase c) noexcept;

// Certifies one of the two cases for the user's single sequenced order.
// Isolation: the order is core. Indifference: removing it does not hurt the miner.
// Throws Violation if neither certificate checks, UnknownAgent if the user does not own
// exactly one order.
GreedyCase classify_theorem_greedy(Potential pot, const Block& block, const Outcome& outcome,
                                   AgentId user);

}  // namespace gsr
