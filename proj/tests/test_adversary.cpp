#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "gsr/adversary.hpp"
#include "gsr/error.hpp"
#include "gsr/exchange.hpp"

using namespace gsr;
using doctest::Approx;

namespace {

std::vector<Side> sides(const std::string& s) {
    std::vector<Side> out;
    for (char c : s) out.push_back(c == 'B' ? Side::Buy : Side::Sell);
    return out;
}

// Per-step agent deltas of a side pattern on the impossibility block, from closed forms.
struct Step {
    double d1;
    double d2;
};

std::vector<Step> pattern_steps(int n, const std::string& p) {
    const double x0 = 4.0 * n;
    const double c = x0 * x0;
    double x1 = x0;
    std::vector<Step> out;
    for (char s : p) {
        const double next = s == 'B' ? x1 - 2 : x1 + 1;
        out.push_back({x1 - next, c / x1 - c / next});
        x1 = next;
    }
    return out;
}

// Largest token-2 gain over every ownership set with zero token-1 change.
double best_zero_position_gain(const std::vector<Step>& steps) {
    double best = -1e300;
    for (unsigned mask = 1; mask < (1u << steps.size()); ++mask) {
        double u1 = 0, u2 = 0;
        for (std::size_t t = 0; t < steps.size(); ++t) {
            if (mask >> t & 1) {
                u1 += steps[t].d1;
                u2 += steps[t].d2;
            }
        }
        if (std::abs(u1) < 1e-12) best = std::max(best, u2);
    }
    return best;
}

}  // namespace

TEST_CASE("sandwich on the constant-product pool") {
    const PoolState x{100, 100};
    const Order user = make_buy(10, 2.0);
    const SandwichPlan plan = plan_sandwich(kProduct, x, user);
    // After the front buy leaves q + w units the user pays c*q / (w (q + w)), which hits q*p here.
    const double c = 10000, q = 10, budget = 20;
    const double w = (-q + std::sqrt(q * q + 4 * c * q / budget)) / 2;
    CHECK(plan.w == Approx(w).epsilon(1e-9));
    CHECK(plan.miner_qty == Approx(100 - q - w).epsilon(1e-9));
    CHECK(std::abs(plan.predicted_profit - (20.0 - 100.0 / 9.0)) <= 1e-9);

    const Game g = sandwich_game(kProduct, x, user, plan.w);
    REQUIRE(g.outcome.size() == 3);
    for (const ExecResult& r : g.outcome.results) CHECK(r.executed());
    const UtilityVector miner = agent_utility(g.outcome, g.block, kMiner);
    CHECK(std::abs(miner.d1) <= 1e-9);
    CHECK(std::abs(miner.d2 - 8.888889) <= 1e-6);
    CHECK(std::abs(plan.user_payment - 20.0) <= 1e-6);
    CHECK_FALSE(verify_greedy(kProduct, x, g.block, g.outcome.ordering));
}

TEST_CASE("a limit equal to the standalone price leaves nothing") {
    const double y = payment_for_buy(kProduct, {100, 100}, 10);
    const SandwichPlan plan = plan_sandwich(kProduct, {100, 100}, make_buy(10, y / 10));
    CHECK(std::abs(plan.predicted_profit) <= 1e-9);
    CHECK(plan.miner_qty <= 1e-6);
}

TEST_CASE("sandwich errors") {
    try {
        plan_sandwich(kAdditive, {100, 100}, make_buy(10, 2.0));
        FAIL("additive pools are not liquidity preserving");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotLiquidityPreserving);
    }
    CHECK_THROWS_AS(plan_sandwich(kProduct, {100, 100}, make_buy(10)), Error);
    CHECK_THROWS_AS(plan_sandwich(kProduct, {100, 100}, make_sell(10, 0.5)), Error);
    CHECK_THROWS_AS(plan_sandwich(kProduct, {100, 100}, make_buy(10, 1.0)), Error);

    // Running the same shape on an additive pool nets the miner nothing.
    const Game g = sandwich_game(kAdditive, {100, 100}, make_buy(10, 2.0), 30.0);
    const UtilityVector miner = agent_utility(g.outcome, g.block, kMiner);
    CHECK(miner.d1 == 0.0);
    CHECK(miner.d2 == 0.0);
}

TEST_CASE("sandwich on the stable pool") {
    const PoolState x{1.2, 1.0};
    const double y = payment_for_buy(kStable, x, 0.1);
    const Order user = make_buy(0.1, 1.5 * y / 0.1);
    const SandwichPlan plan = plan_sandwich(kStable, x, user);
    const Game g = sandwich_game(kStable, x, user, plan.w);
    const UtilityVector miner = agent_utility(g.outcome, g.block, kMiner);
    CHECK(std::abs(miner.d1) <= 1e-9);
    CHECK(miner.d2 == Approx(plan.predicted_profit).epsilon(1e-6));
    CHECK(plan.user_payment <= user.limit_amount() + 1e-9);
}

TEST_CASE("impossibility block") {
    const ImpossibilityInstance inst = impossibility_block(3);
    CHECK(inst.x0 == PoolState{12, 12});
    REQUIRE(inst.block.size() == 6);
    int buys = 0;
    for (const Order& o : inst.block.orders()) {
        buys += o.is_buy() ? 1 : 0;
        CHECK(o.is_market());
        CHECK(o.qty == (o.is_buy() ? 2.0 : 1.0));
    }
    CHECK(buys == 3);
    CHECK(impossibility_block(4).block.size() == 8);
    try {
        impossibility_block(2);
        FAIL("n = 2 is too small");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NTooSmall);
    }
    CHECK(side_patterns(3).size() == 20);
    CHECK(side_patterns(4).size() == 70);
    CHECK(side_patterns(5).size() == 252);
}

TEST_CASE("exploit selection on B S S B S B") {
    const ImpossibilityInstance inst = impossibility_block(3);
    const ExecutionOrdering t = pattern_ordering(inst.block, sides("BSSBSB"));
    const ExploitSelection sel = select_exploit(kProduct, inst.x0, inst.block, t);
    const Block owned = assign_exploit_ownership(inst.block, sel);
    const UtilityVector u = agent_utility(execute_ordering(kProduct, inst.x0, owned, t), owned, kMiner);
    CHECK(std::abs(u.d1) <= 1e-9);
    CHECK(u.d2 > 1e-9);
    CHECK(best_zero_position_gain(pattern_steps(3, "BSSBSB")) > 1e-9);
}

TEST_CASE("exploit selection on S S S B B B") {
    const ImpossibilityInstance inst = impossibility_block(3);
    const ExecutionOrdering t = pattern_ordering(inst.block, sides("SSSBBB"));
    const ExploitSelection sel = select_exploit(kProduct, inst.x0, inst.block, t);
    CHECK(sel.k == 3.0);
    CHECK(sel.buy_position == 3);
    CHECK(sel.z_trace[sel.sell_positions[0]] == 0.0);
    CHECK(sel.z_trace[sel.sell_positions[1]] == 1.0);
}

TEST_CASE("S B S S B B at n = 3 has no risk-free profit") {
    // Z = 0, 1, -1, 0, 1, -1, -3: the best buy runs at k = 1 and only one sell runs at Z <= -1.
    const ImpossibilityInstance inst = impossibility_block(3);
    const ExecutionOrdering t = pattern_ordering(inst.block, sides("SBSSBB"));
    try {
        select_exploit(kProduct, inst.x0, inst.block, t);
        FAIL("expected no qualifying pair of sells");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CaseTwoReached);
    }
    // No ownership set at all gains token 2 without moving token 1.
    CHECK(best_zero_position_gain(pattern_steps(3, "SBSSBB")) <= 1e-12);
}

TEST_CASE("every ordering is exploitable for n = 4 and 5") {
    for (int n : {4, 5}) {
        const ImpossibilityInstance inst = impossibility_block(n);
        for (const auto& pattern : side_patterns(n)) {
            const ExecutionOrdering t = pattern_ordering(inst.block, pattern);
            const ExploitSelection sel = select_exploit(kProduct, inst.x0, inst.block, t);
            const Block owned = assign_exploit_ownership(inst.block, sel);
            const UtilityVector u = agent_utility(execute_ordering(kProduct, inst.x0, owned, t), owned, kMiner);
            CHECK(std::abs(u.d1) <= 1e-9);
            CHECK(u.d2 > 1e-9);
        }
    }
}

TEST_CASE("pattern ordering validation") {
    const ImpossibilityInstance inst = impossibility_block(3);
    CHECK_THROWS_AS(pattern_ordering(inst.block, sides("BBBBSS")), Error);
    CHECK_THROWS_AS(pattern_ordering(inst.block, sides("BBS")), Error);
}
