#include "gsr/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"

namespace gsr {

std::string_view to_string(RuleKind rule) noexcept {
    return rule == RuleKind::Greedy ? "greedy" : "arbitrary";
}

RuleKind parse_rule(std::string_view name) {
    if (name == "greedy") return RuleKind::Greedy;
    if (name == "arbitrary") return RuleKind::Arbitrary;
    throw Error(ErrorCode::ParseError, "unknown rule '" + std::string(name) + "'");
}

std::string_view to_string(GreedyCase c) noexcept {
    return c == GreedyCase::Indifference ? "indifference" : "isolation";
}

Outcome execute_ordering(Potential pot, PoolState x0, const Block& block, const ExecutionOrdering& ordering) {
    if (ordering.size() != block.size()) {
        throw Error(ErrorCode::InvalidPermutation, "ordering length differs from block size");
    }
    Outcome out{x0, ordering, {}, {}};
    out.states.reserve(ordering.size());
    out.results.reserve(ordering.size());
    PoolState state = x0;
    for (std::size_t t = 0; t < ordering.size(); ++t) {
        ExecResult r = execute_order(pot, state, block.order(ordering[t]));
        state = r.next;
        out.states.push_back(state);
        out.results.push_back(r);
    }
    return out;
}

Game run_game(Potential pot, PoolState x0, std::span<const Order> user_orders,
              std::span<const AgentId> user_ids, std::span<const Order> miner_orders,
              const GameSetup& setup) {
    if (!user_ids.empty() && user_ids.size() != user_orders.size()) {
        throw Error(ErrorCode::InvalidOrder, "user ids must match user orders");
    }
    Block block;
    for (std::size_t i = 0; i < user_orders.size(); ++i) {
        const AgentId id = user_ids.empty() ? static_cast<AgentId>(i + 1) : user_ids[i];
        if (id == kMiner) throw Error(ErrorCode::InvalidOrder, "agent 0 is reserved for the miner");
        block.add(user_orders[i], id);
    }
    for (const Order& o : miner_orders) block.add(o, kMiner);

    ExecutionOrdering ordering;
    if (setup.rule == RuleKind::Greedy) {
        ordering = greedy_sequence(pot, x0, block, setup.greedy);
    } else if (setup.permutation) {
        ordering = arbitrary_sequence(block, *setup.permutation);
    } else {
        ordering = ExecutionOrdering::identity(block.size());
    }
    Outcome outcome = execute_ordering(pot, x0, block, ordering);
    return Game{std::move(block), std::move(outcome)};
}

UtilityVector step_utility(const Outcome& outcome, std::size_t t) {
    if (!outcome.results.at(t).executed()) return {};
    const PoolState before = outcome.state_before(t);
    const PoolState after = outcome.states[t];
    return UtilityVector{before.x1 - after.x1, before.x2 - after.x2};
}

UtilityVector agent_utility(const Outcome& outcome, const Block& block, AgentId agent,
                            std::span<const AgentId> roster) {
    const auto owners = block.owners();
    const bool known = agent == kMiner || std::find(owners.begin(), owners.end(), agent) != owners.end() ||
                       std::find(roster.begin(), roster.end(), agent) != roster.end();
    if (!known) throw Error(ErrorCode::UnknownAgent, "agent " + std::to_string(agent) + " is not in the game");

    UtilityVector total;
    for (std::size_t t = 0; t < outcome.size(); ++t) {
        if (block.owner(outcome.ordering[t]) == agent) total += step_utility(outcome, t);
    }
    return total;
}

bool is_risk_free(UtilityVector u, double tol) noexcept { return u.d1 >= -tol && u.d2 >= -tol; }

bool is_profitable_risk_free(UtilityVector u, double tol) noexcept {
    return is_risk_free(u, tol) && std::max(u.d1, u.d2) > tol;
}

bool dominates(UtilityVector a, UtilityVector b, double tol) noexcept {
    return a.d1 >= b.d1 - tol * std::max(1.0, std::abs(b.d1)) &&
           a.d2 >= b.d2 - tol * std::max(1.0, std::abs(b.d2));
}

bool better_execution(Potential pot, const Order& order, PoolState x, PoolState reference,
                      const Tolerances& tol) {
    if (!can_execute(pot, reference, order, tol)) return true;
    if (!can_execute(pot, x, order, tol)) return false;
    const double here = order_amount(pot, x, order, tol);
    const double there = order_amount(pot, reference, order, tol);
    const double slack = tol.cmp * std::max(1.0, std::abs(there));
    return order.is_buy() ? here <= there + slack : here >= there - slack;
}

bool CoreTail::tail_single_side(const Block& block) const {
    return std::all_of(tail.begin(), tail.end(), [&](std::size_t i) { return block.order(i).is_buy(); }) ||
           std::all_of(tail.begin(), tail.end(), [&](std::size_t i) { return block.order(i).is_sell(); });
}

CoreTail core_tail_decompose(Potential pot, const Block& block, const Outcome& outcome) {
    CoreTail split;
    for (std::size_t t = 0; t < outcome.size(); ++t) {
        const std::size_t index = outcome.ordering[t];
        const bool core = better_execution(pot, block.order(index), outcome.state_before(t), outcome.x0);
        (core ? split.core : split.tail).push_back(index);
    }
    return split;
}

GreedyCase classify_theorem_greedy(Potential pot, const Block& block, const Outcome& outcome, AgentId user) {
    std::size_t position = outcome.size();
    std::size_t owned = 0;
    for (std::size_t t = 0; t < outcome.size(); ++t) {
        if (block.owner(outcome.ordering[t]) == user) {
            position = t;
            ++owned;
        }
    }
    if (owned != 1) {
        throw Error(ErrorCode::UnknownAgent, "user must own exactly one sequenced order");
    }
    const std::size_t index = outcome.ordering[position];
    if (better_execution(pot, block.order(index), outcome.state_before(position), outcome.x0)) {
        return GreedyCase::Isolation;
    }

    // Same block and same relative order, minus the user's order.
    std::vector<Order> orders;
    std::vector<AgentId> owners;
    std::vector<std::size_t> remap(block.size(), block.size());
    for (std::size_t i = 0; i < block.size(); ++i) {
        if (i == index) continue;
        remap[i] = orders.size();
        orders.push_back(block.order(i));
        owners.push_back(block.owner(i));
    }
    Block reduced(std::move(orders), std::move(owners));
    std::vector<std::size_t> seq;
    for (std::size_t t = 0; t < outcome.size(); ++t) {
        if (t != position) seq.push_back(remap[outcome.ordering[t]]);
    }
    const Outcome without = execute_ordering(pot, outcome.x0, reduced, ExecutionOrdering(std::move(seq)));

    const UtilityVector with_user = agent_utility(outcome, block, kMiner);
    const UtilityVector without_user = agent_utility(without, reduced, kMiner);
    if (!dominates(without_user, with_user)) {
        throw Error(ErrorCode::Violation, "removing the user's order lowers the miner's utility");
    }
    return GreedyCase::Indifference;
}

}  // namespace gsr
