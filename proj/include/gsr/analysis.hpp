#pragma once

// Runtime checks for the pricing and duality properties of level sets.

#include <span>
#include <vector>

#include "gsr/types.hpp"

namespace gsr {

// Point on the level set {phi = level} with the given token-1 reserve.
PoolState level_point(Potential pot, double level, double x1, const Tolerances& tol = kTol);

// Buying q costs no more, and selling q earns no more, at the state with the larger
// token-1 reserve. Inequalities whose order cannot execute at both states are vacuous.
// Throws NotOnLevelSet when either reserve has no point on the level set.
bool check_pricing_lemma(Potential pot, double level, double x1_low, double x1_high, double qty,
                         const Tolerances& tol = kTol);

enum class DualitySide : std::uint8_t { BuysBetterAtX, SellsBetterAtX };

std::string_view to_string(DualitySide side) noexcept;

// The side favoured at `x` against `x_prime` follows from comparing token-1 reserves;
// every probe of that side must execute at least as well at `x`.
// Throws NotOnLevelSet if either state is off the level set, ProbeViolation on a failing probe.
DualitySide check_duality(Potential pot, double level, PoolState x, PoolState x_prime,
                          std::span<const Order> probes, const Tolerances& tol = kTol);

struct SlopeSample {
    double x = 0.0;
    double y = 0.0;
    double r = 0.0;  // (f(y) - f(x)) / (y - x)
};

// Slopes of the level-set generator between every pair of distinct sample points.
std::vector<SlopeSample> slope_samples(Potential pot, double level, std::span<const double> xs,
                                       const Tolerances& tol = kTol);

// R(x, y) is nondecreasing in each argument over the sorted sample points.
bool check_slope_monotone(Potential pot, double level, std::span<const double> sorted_xs,
                          const Tolerances& tol = kTol);

}  // namespace gsr
