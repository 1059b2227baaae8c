#include "gsr/adversary.hpp"

#include <cmath>
#include <string>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"

namespace gsr {

namespace {

// Pool state the user's order meets after the miner front-runs with Buy(miner_qty).
bool front_run_state(Potential pot, PoolState x, double miner_qty, PoolState& out) {
    if (miner_qty <= 0.0) {
        out = x;
        return true;
    }
    const ExecResult front = execute_order(pot, x, make_buy(miner_qty));
    out = front.next;
    return front.executed();
}

}  // namespace

SandwichPlan plan_sandwich(Potential pot, PoolState x, const Order& user, const Tolerances& tol) {
    if (!user.is_buy() || !std::isfinite(user.limit)) {
        throw Error(ErrorCode::UserOrderInfeasible, "sandwich target must be a buy with a finite limit");
    }
    if (!pot.is_liquidity_preserving()) {
        throw Error(ErrorCode::NotLiquidityPreserving, "additive pools cannot be sandwiched");
    }
    if (!can_execute(pot, x, user, tol)) {
        throw Error(ErrorCode::UserOrderInfeasible, "user order cannot execute at the initial state");
    }

    const double span = x.x1 - user.qty;
    auto user_executes = [&](double w) {
        PoolState mid;
        return front_run_state(pot, x, span - w, mid) && can_execute(pot, mid, user, tol);
    };

    // At w = 0 the front-run leaves exactly q units of token 1 and the user cannot
    // execute; at w = span there is no front-run.
    double lo = 0.0;
    double hi = span;
    if (user_executes(lo)) {
        hi = lo;
    } else {
        for (int i = 0; i < tol.root_iters && hi - lo > tol.root_abs; ++i) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            (user_executes(mid) ? hi : lo) = mid;
        }
    }

    SandwichPlan plan;
    plan.user = user;
    plan.w = hi;
    plan.miner_qty = span - hi;
    PoolState mid;
    front_run_state(pot, x, plan.miner_qty, mid);
    plan.user_payment = payment_for_buy(pot, mid, user.qty, tol);
    plan.predicted_profit = user.limit_amount() - payment_for_buy(pot, x, user.qty, tol);
    return plan;
}

Game sandwich_game(Potential pot, PoolState x, const Order& user, double w) {
    const double miner_qty = x.x1 - user.qty - w;
    Block block;
    std::vector<std::size_t> seq;
    if (miner_qty > 0.0) {
        seq.push_back(block.add(make_buy(miner_qty), kMiner));
        seq.push_back(block.add(user, AgentId{1}));
        seq.push_back(block.add(make_sell(miner_qty), kMiner));
    } else {
        seq.push_back(block.add(user, AgentId{1}));
    }
    ExecutionOrdering ordering(std::move(seq));
    Outcome outcome = execute_ordering(pot, x, block, ordering);
    return Game{std::move(block), std::move(outcome)};
}

ImpossibilityInstance impossibility_block(int n) {
    if (n < 3) throw Error(ErrorCode::NTooSmall, "impossibility block needs n >= 3");
    const double reserve = 4.0 * n;
    Block block;
    for (int i = 0; i < n; ++i) block.add(make_buy(2.0), AgentId{1});
    for (int i = 0; i < n; ++i) block.add(make_sell(1.0), AgentId{1});
    return ImpossibilityInstance{{reserve, reserve}, std::move(block)};
}

std::vector<std::vector<Side>> side_patterns(int n) {
    std::vector<std::vector<Side>> out;
    std::vector<Side> current;
    auto recurse = [&](auto&& self, int buys_left, int sells_left) -> void {
        if (buys_left == 0 && sells_left == 0) {
            out.push_back(current);
            return;
        }
        if (buys_left > 0) {
            current.push_back(Side::Buy);
            self(self, buys_left - 1, sells_left);
            current.pop_back();
        }
        if (sells_left > 0) {
            current.push_back(Side::Sell);
            self(self, buys_left, sells_left - 1);
            current.pop_back();
        }
    };
    recurse(recurse, n, n);
    return out;
}

ExecutionOrdering pattern_ordering(const Block& block, const std::vector<Side>& pattern) {
    std::vector<std::size_t> buys;
    std::vector<std::size_t> sells;
    for (std::size_t i = 0; i < block.size(); ++i) {
        (block.order(i).is_buy() ? buys : sells).push_back(i);
    }
    if (pattern.size() != block.size()) {
        throw Error(ErrorCode::InvalidPermutation, "pattern length differs from block size");
    }
    std::vector<std::size_t> seq;
    std::size_t nb = 0;
    std::size_t ns = 0;
    for (Side side : pattern) {
        if (side == Side::Buy) {
            if (nb == buys.size()) throw Error(ErrorCode::InvalidPermutation, "pattern has too many buys");
            seq.push_back(buys[nb++]);
        } else {
            if (ns == sells.size()) throw Error(ErrorCode::InvalidPermutation, "pattern has too many sells");
            seq.push_back(sells[ns++]);
        }
    }
    return ExecutionOrdering(std::move(seq));
}

ExploitSelection select_exploit(Potential pot, PoolState x0, const Block& block,
                                const ExecutionOrdering& ordering) {
    const Outcome outcome = execute_ordering(pot, x0, block, ordering);
    ExploitSelection sel;
    sel.z_trace.reserve(outcome.size() + 1);
    sel.z_trace.push_back(0.0);
    for (const PoolState& s : outcome.states) sel.z_trace.push_back(s.x1 - x0.x1);

    bool have_buy = false;
    for (std::size_t t = 0; t < ordering.size(); ++t) {
        if (!block.order(ordering[t]).is_buy()) continue;
        if (!have_buy || sel.z_trace[t] > sel.k) {
            sel.k = sel.z_trace[t];
            sel.buy_position = t;
            have_buy = true;
        }
    }
    if (!have_buy) throw Error(ErrorCode::CaseTwoReached, "ordering contains no buy order");

    std::size_t found = 0;
    for (std::size_t t = 0; t < ordering.size() && found < 2; ++t) {
        if (block.order(ordering[t]).is_sell() && sel.z_trace[t] <= sel.k - 2.0) {
            sel.sell_positions[found++] = t;
        }
    }
    if (found < 2) {
        throw Error(ErrorCode::CaseTwoReached, "fewer than two sells execute two units below the best buy");
    }
    sel.buy_index = ordering[sel.buy_position];
    sel.sell_indices = {ordering[sel.sell_positions[0]], ordering[sel.sell_positions[1]]};
    return sel;
}

Block assign_exploit_ownership(const Block& block, const ExploitSelection& selection) {
    Block out = block;
    AgentId next_user = 1;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const bool miner = i == selection.buy_index || i == selection.sell_indices[0] ||
                           i == selection.sell_indices[1];
        out.set_owner(i, miner ? kMiner : next_user++);
    }
    return out;
}

}  // namespace gsr
