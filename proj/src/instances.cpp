#include "gsr/instances.hpp"

#include <algorithm>
#include <cmath>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"

namespace gsr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
    return Rng(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index));
}

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool in_regular_domain(Potential pot, PoolState x) noexcept {
    if (pot.kind != PotentialKind::Stable) return x.x1 >= 0.0 && x.x2 >= 0.0;
    return x.x1 > 0.0 && x.x2 > 0.0 && x.x1 <= kStableRegularBound && x.x2 <= kStableRegularBound;
}

Potential random_potential(Rng& rng) {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: return kProduct;
        case 1: return kAdditive;
        default: return kStable;
    }
}

PoolState random_state(Rng& rng, Potential pot) {
    if (pot.kind == PotentialKind::Stable) return {uniform(rng, 0.5, 1.5), uniform(rng, 0.5, 1.5)};
    return {uniform(rng, 20.0, 500.0), uniform(rng, 20.0, 500.0)};
}

double random_quantity(Rng& rng, PoolState x, double max_fraction) {
    const double cap = max_fraction * std::min(x.x1, x.x2);
    // Keep quantities away from zero so every order is a valid Order.
    return uniform(rng, 0.01 * cap, cap);
}

Order random_order(Rng& rng, Potential pot, PoolState x, Side side, double max_fraction, double market_prob) {
    const double qty = random_quantity(rng, x, max_fraction);
    const bool market = uniform(rng, 0.0, 1.0) < market_prob;
    const double factor = uniform(rng, 0.5, 2.0);
    if (market) return side == Side::Buy ? make_buy(qty) : make_sell(qty);

    double price = x.x2 / x.x1;
    try {
        price = order_amount(pot, x, Order{side, qty, 0.0}) / qty;
    } catch (const Error&) {
    }
    const double limit = factor * price;
    return side == Side::Buy ? make_buy(qty, limit) : make_sell(qty, limit);
}

Order random_order(Rng& rng, Potential pot, PoolState x, double max_fraction, double market_prob) {
    const Side side = std::bernoulli_distribution(0.5)(rng) ? Side::Buy : Side::Sell;
    return random_order(rng, pot, x, side, max_fraction, market_prob);
}

std::vector<Order> random_probes(Rng& rng, Potential pot, PoolState x, std::size_t count) {
    std::vector<Order> probes;
    probes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        probes.push_back(random_order(rng, pot, x, i % 2 == 0 ? Side::Buy : Side::Sell, 0.5, 0.3));
    }
    return probes;
}

Block random_block(Rng& rng, Potential pot, PoolState x0, std::size_t size, double miner_prob,
                   double market_prob) {
    const double fraction = pot.kind == PotentialKind::Stable ? 0.05 : 0.2;
    Block block;
    AgentId next_user = 1;
    for (std::size_t i = 0; i < size; ++i) {
        const Order order = random_order(rng, pot, x0, fraction, market_prob);
        const bool miner = uniform(rng, 0.0, 1.0) < miner_prob;
        block.add(order, miner ? kMiner : next_user++);
    }
    return block;
}

TieBreak random_tie_break(Rng& rng) {
    const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
    return TieBreak{static_cast<TieBreak::Kind>(kind), rng()};
}

GreedyInstance random_greedy_instance(Rng& rng, std::size_t max_size, double market_prob) {
    for (;;) {
        GreedyInstance inst;
        inst.pot = random_potential(rng);
        inst.x0 = random_state(rng, inst.pot);
        const std::size_t size = std::uniform_int_distribution<std::size_t>(1, max_size)(rng);
        inst.block = random_block(rng, inst.pot, inst.x0, size, 0.3, market_prob);
        inst.opts.tie_break = random_tie_break(rng);
        inst.outcome = execute_ordering(inst.pot, inst.x0, inst.block,
                                        greedy_sequence(inst.pot, inst.x0, inst.block, inst.opts));
        const bool regular = std::all_of(inst.outcome.states.begin(), inst.outcome.states.end(),
                                         [&](PoolState s) { return in_regular_domain(inst.pot, s); });
        if (regular) return inst;
    }
}

}  // namespace gsr
