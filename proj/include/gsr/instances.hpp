#pragma once

// Seeded random instances for the property suites.

#include <cstdint>
#include <random>
#include <vector>

#include "gsr/game.hpp"
#include "gsr/sequencing.hpp"
#include "gsr/types.hpp"

namespace gsr {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream, index); identical whichever thread runs it.
Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

double uniform(Rng& rng, double lo, double hi);

// The stable potential is increasing and quasiconcave only for reserves up to 2;
// stable instances are drawn and kept inside that box.
inline constexpr double kStableRegularBound = 2.0;
bool in_regular_domain(Potential pot, PoolState x) noexcept;

Potential random_potential(Rng& rng);
PoolState random_state(Rng& rng, Potential pot);

// Quantity up to `max_fraction` of the smaller reserve.
double random_quantity(Rng& rng, PoolState x, double max_fraction);

// Market order with probability `market_prob`; otherwise a limit between 0.5x and 2x
// the standalone price at `x`.
Order random_order(Rng& rng, Potential pot, PoolState x, Side side, double max_fraction,
                   double market_prob = 0.5);
Order random_order(Rng& rng, Potential pot, PoolState x, double max_fraction, double market_prob = 0.5);

// Probes of both sides, quantities up to half the smaller reserve.
std::vector<Order> random_probes(Rng& rng, Potential pot, PoolState x, std::size_t count);

// A block where the miner owns each order with probability `miner_prob` and every
// other order has a distinct user (1, 2, ...).
Block random_block(Rng& rng, Potential pot, PoolState x0, std::size_t size, double miner_prob = 0.3,
                   double market_prob = 0.5);

TieBreak random_tie_break(Rng& rng);

struct GreedyInstance {
    Potential pot;
    PoolState x0;
    Block block;
    GreedyOptions opts;
    Outcome outcome;  // the greedy rule's trace under opts
};

// Block of 1..max_size orders sequenced by the greedy rule with a random tie-break.
// Stable instances whose trace leaves the regular box are redrawn.
GreedyInstance random_greedy_instance(Rng& rng, std::size_t max_size, double market_prob = 0.5);

}  // namespace gsr
