#pragma once

// Miner strategies: the sandwich around a user's buy, and the ownership
// choice that makes any fixed ordering of the impossibility block profitable.

#include <array>
#include <vector>

#include "gsr/game.hpp"
#include "gsr/sequencing.hpp"
#include "gsr/types.hpp"

namespace gsr {

// Miner buys X1 - q - w before the user's Buy(q, p) and sells it back right after.
struct SandwichPlan {
    double w = 0.0;
    double miner_qty = 0.0;     // X1 - q - w; zero means the miner has nothing to inject
    double user_payment = 0.0;  // what the user pays inside the sandwich
    double predicted_profit = 0.0;  // q*p - Y(X, Buy(q))
    Order user;

    bool has_miner_orders() const noexcept { return miner_qty > 0.0; }
    Order front() const { return make_buy(miner_qty); }
    Order back() const { return make_sell(miner_qty); }
};

// Smallest w that still lets the user's order execute, found by bisection.
// Throws NotLiquidityPreserving for the additive potential, UserOrderInfeasible
// when the order cannot execute at `x` or has no finite limit.
SandwichPlan plan_sandwich(Potential pot, PoolState x, const Order& user, const Tolerances& tol = kTol);

// The three-order block (front, user, back) for a given w, miner as agent 0 and the
// user as agent 1, with the ordering that sandwiches the user. No feasibility checks.
Game sandwich_game(Potential pot, PoolState x, const Order& user, double w);

// The block of the impossibility construction: X0 = (4n, 4n), n Buy(2) then n Sell(1).
struct ImpossibilityInstance {
    PoolState x0;
    Block block;
};

// Throws NTooSmall for n < 3.
ImpossibilityInstance impossibility_block(int n);

// All C(2n, n) arrangements of n buys and n sells.
std::vector<std::vector<Side>> side_patterns(int n);

// Ordering of `block` whose sides follow `pattern`; same-side orders taken by ascending index.
ExecutionOrdering pattern_ordering(const Block& block, const std::vector<Side>& pattern);

struct ExploitSelection {
    std::size_t buy_position = 0;  // 0-based step in the ordering
    std::array<std::size_t, 2> sell_positions{};
    std::size_t buy_index = 0;  // block indices of the same orders
    std::array<std::size_t, 2> sell_indices{};
    double k = 0.0;             // Z before the selected buy
    std::vector<double> z_trace;  // z_trace[t] = X_{t,1} - X_{0,1}, t = 0..|T|
};

// Picks the buy executing at the highest token-1 reserve and two sells executing at
// least two units lower. Throws CaseTwoReached if two such sells do not exist.
ExploitSelection select_exploit(Potential pot, PoolState x0, const Block& block,
                                const ExecutionOrdering& ordering);

// Copy of `block` where the miner owns the selected orders and each other order has its
// own user (agents 1, 2, ...).
Block assign_exploit_ownership(const Block& block, const ExploitSelection& selection);

}  // namespace gsr
