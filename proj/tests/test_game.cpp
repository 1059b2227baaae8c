#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"
#include "gsr/game.hpp"
#include "gsr/instances.hpp"

using namespace gsr;
using doctest::Approx;

namespace {

// Best miner result over every greedy-valid ordering of `sides` (quantities `qb`, `qs`) and every
// choice of miner-owned steps with zero net token-1, evaluated with constant-product closed forms.
struct Best {
    double d2 = -1e300;
    std::vector<char> pattern;
    std::vector<int> owned;
};

Best brute_force_figure(double x0, double qb, double qs, bool either_at_origin) {
    const double c = x0 * x0;
    std::vector<char> p{'B', 'B', 'B', 'S', 'S', 'S'};
    Best best;
    do {
        // Greedy validity from the rule's definition.
        double x1 = x0;
        bool valid = true;
        std::vector<double> d1(6), d2(6);
        for (int t = 0; t < 6; ++t) {
            const bool mixed = std::find(p.begin() + t, p.end(), 'B') != p.end() &&
                               std::find(p.begin() + t, p.end(), 'S') != p.end();
            if (mixed && ((x1 > x0 && p[t] == 'S') || (x1 < x0 && p[t] == 'B') ||
                          (x1 == x0 && p[t] == 'S' && !either_at_origin))) {
                valid = false;
            }
            const double next = p[t] == 'B' ? x1 - qb : x1 + qs;
            d1[t] = x1 - next;
            d2[t] = c / x1 - c / next;
            x1 = next;
        }
        if (!valid) continue;
        for (int mask = 1; mask < 64; ++mask) {
            double u1 = 0, u2 = 0;
            std::vector<int> owned;
            for (int t = 0; t < 6; ++t) {
                if (mask >> t & 1) {
                    u1 += d1[t];
                    u2 += d2[t];
                    owned.push_back(t);
                }
            }
            if (std::abs(u1) < 1e-12 && u2 > best.d2) best = {u2, p, owned};
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

}  // namespace

TEST_CASE("single-order game") {
    const std::vector<Order> users{make_buy(10)};
    const std::vector<AgentId> ids{1};
    const Game g = run_game(kProduct, {100, 100}, users, ids, {});
    REQUIRE(g.outcome.size() == 1);
    CHECK(g.outcome.final_state().x1 == 90.0);
    CHECK(g.outcome.final_state().x2 == Approx(111.111111111));
    const UtilityVector u = agent_utility(g.outcome, g.block, 1);
    CHECK(u.d1 == 10.0);
    CHECK(u.d2 == Approx(-11.111111111));
    CHECK(agent_utility(g.outcome, g.block, kMiner).d1 == 0.0);
}

TEST_CASE("empty game") {
    const Game g = run_game(kProduct, {100, 100}, {}, {}, {});
    CHECK(g.outcome.size() == 0);
    CHECK(g.outcome.final_state() == PoolState{100, 100});
}

TEST_CASE("users cannot be agent zero") {
    const std::vector<Order> users{make_buy(10)};
    const std::vector<AgentId> ids{kMiner};
    CHECK_THROWS_AS(run_game(kProduct, {100, 100}, users, ids, {}), Error);
}

TEST_CASE("censored and unknown agents") {
    const Game g = run_game(kProduct, {100, 100}, {}, {}, {});
    const std::vector<AgentId> roster{5};
    const UtilityVector u = agent_utility(g.outcome, g.block, 5, roster);
    CHECK(u.d1 == 0.0);
    CHECK(u.d2 == 0.0);
    CHECK_THROWS_AS(agent_utility(g.outcome, g.block, 6, roster), Error);
}

TEST_CASE("risk-free classification") {
    CHECK_FALSE(is_risk_free({-1, 1}));
    CHECK(is_risk_free({0, 0}));
    CHECK_FALSE(is_profitable_risk_free({0, 0}));
    CHECK(is_profitable_risk_free({1, 0}));
    CHECK(dominates({1, 2}, {1, 1}));
    CHECK_FALSE(dominates({0, 2}, {1, 1}));
}

TEST_CASE("execution quality") {
    const PoolState ref{100, 100};
    const PoolState lower{90, 10000.0 / 90.0};
    const Order buy = make_buy(10);
    CHECK(payment_for_buy(kProduct, lower, 10) == Approx(13.888888889));
    CHECK_FALSE(better_execution(kProduct, buy, lower, ref));
    CHECK(better_execution(kProduct, buy, ref, lower));
    CHECK(better_execution(kProduct, buy, ref, ref));
    // Failing at the reference makes any state at least as good.
    CHECK(better_execution(kProduct, make_buy(10, 1.0), lower, ref));
}

TEST_CASE("core and tail") {
    Block one{{make_buy(5)}};
    const Outcome a = execute_ordering(kProduct, {100, 100}, one, ExecutionOrdering::identity(1));
    CHECK(core_tail_decompose(kProduct, one, a).core == std::vector<std::size_t>{0});

    Block alt{{make_buy(5), make_sell(5)}};
    const Outcome b = execute_ordering(kProduct, {100, 100}, alt, ExecutionOrdering::identity(2));
    const CoreTail split = core_tail_decompose(kProduct, alt, b);
    CHECK(split.core.size() == 2);
    CHECK(split.tail.empty());

    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng rng = trial_rng(4, 4, i);
        const GreedyInstance inst = random_greedy_instance(rng, 10);
        const CoreTail ct = core_tail_decompose(inst.pot, inst.block, inst.outcome);
        CHECK(ct.core.size() + ct.tail.size() == inst.block.size());
        CHECK(ct.tail_single_side(inst.block));
    }
}

TEST_CASE("figure block: the miner profits without a token-1 position") {
    // Block of three Buy(2) and three Sell(2) at (10, 10).
    const Best either = brute_force_figure(10, 2, 2, true);
    CHECK(either.d2 == Approx(5.0 / 6.0));
    CHECK(either.owned.size() == 2);
    // Taking only buys at the origin leaves nothing to gain.
    CHECK(brute_force_figure(10, 2, 2, false).d2 == Approx(0.0));
    // With Sell(1) the miner owns one buy and two sells and gains under either tie rule.
    const Best sell1 = brute_force_figure(10, 2, 1, false);
    CHECK(sell1.d2 == Approx(5.0 / 18.0));
    CHECK(sell1.owned == std::vector<int>{0, 1, 4});

    // The library reproduces the brute-force optimum on the same ordering.
    Block block;
    for (int i = 0; i < 3; ++i) block.add(make_buy(2), 1 + i);
    for (int i = 0; i < 3; ++i) block.add(make_sell(2), 4 + i);
    // S B B S B S with the miner on steps 2 and 4.
    const ExecutionOrdering t({3, 0, 1, 4, 2, 5});
    block.set_owner(0, kMiner);
    block.set_owner(4, kMiner);
    CHECK(verify_greedy(kProduct, {10, 10}, block, t));
    GreedyOptions buy_only;
    buy_only.origin_tie = OriginTie::BuyOnly;
    CHECK_FALSE(verify_greedy(kProduct, {10, 10}, block, t, buy_only));
    const Outcome out = execute_ordering(kProduct, {10, 10}, block, t);
    const UtilityVector m = agent_utility(out, block, kMiner);
    CHECK(std::abs(m.d1) <= 1e-12);
    CHECK(m.d2 == Approx(either.d2));
    CHECK(core_tail_decompose(kProduct, block, out).tail_single_side(block));
}

TEST_CASE("theorem cases") {
    Block one{{make_buy(5)}};
    const Outcome a = execute_ordering(kProduct, {100, 100}, one, ExecutionOrdering::identity(1));
    CHECK(classify_theorem_greedy(kProduct, one, a, 1) == GreedyCase::Isolation);

    // All buys: the user's order runs last, after the reserve already fell.
    Block buys;
    buys.add(make_buy(4), kMiner);
    buys.add(make_buy(3), 2);
    buys.add(make_buy(6), 1);
    const Outcome b = execute_ordering(kProduct, {100, 100}, buys, greedy_sequence(kProduct, {100, 100}, buys));
    CHECK(classify_theorem_greedy(kProduct, buys, b, 1) == GreedyCase::Indifference);
    CHECK_THROWS_AS(classify_theorem_greedy(kProduct, buys, b, 9), Error);
}

TEST_CASE("a limit order that only executes without the user hurts the miner") {
    // X0 = (100, 100). Users buy 1 then 5; a third buy of 10 with limit 1.2 aborts after the
    // user's order but executes without it; the miner's market buy then pays more.
    Block block;
    block.add(make_buy(1), 3);
    block.add(make_buy(5), 1);
    block.add(make_buy(10, 1.2), 2);
    block.add(make_buy(5), kMiner);
    const PoolState x0{100, 100};
    const Outcome with = execute_ordering(kProduct, x0, block, greedy_sequence(kProduct, x0, block));
    REQUIRE(with.ordering.sequence() == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK_FALSE(with.results[2].executed());
    // Closed forms on the level 10000: the miner pays at x1 = 94 with the user, at 89 without.
    const double with_user = 10000.0 / 89.0 - 10000.0 / 94.0;
    const double without_user = 10000.0 / 84.0 - 10000.0 / 89.0;
    CHECK(-agent_utility(with, block, kMiner).d2 == Approx(with_user));
    CHECK(without_user > with_user);
    try {
        classify_theorem_greedy(kProduct, block, with, 1);
        FAIL("expected the indifference certificate to fail");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Violation);
    }
}

TEST_CASE("tokens are conserved") {
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng rng = trial_rng(8, 2, i);
        const GreedyInstance inst = random_greedy_instance(rng, 10);
        std::vector<AgentId> agents(inst.block.owners().begin(), inst.block.owners().end());
        agents.push_back(kMiner);
        std::sort(agents.begin(), agents.end());
        agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
        UtilityVector total;
        for (AgentId a : agents) total += agent_utility(inst.outcome, inst.block, a);
        const PoolState end = inst.outcome.final_state();
        CHECK(std::abs(total.d1 + end.x1 - inst.x0.x1) <= 1e-6);
        CHECK(std::abs(total.d2 + end.x2 - inst.x0.x2) <= 1e-6);
    }
}
