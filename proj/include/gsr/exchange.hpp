#pragma once

// Two-token liquidity pool: potential evaluation, pricing and order execution.
//
// A trade is admissible only if it keeps the pool on the level set of its
// potential. Product and Additive potentials are priced in closed form, the
// Stable potential by bisection on the token-2 amount.

#include "gsr/types.hpp"

namespace gsr {

double eval_potential(Potential pot, PoolState x) noexcept;

// Token-2 amount Y(X, Buy(q)): the least y >= 0 with phi(x1 - q, x2 + y) >= phi(X).
// Throws QuantityExceedsReserve when q > x1, NoSolution when no finite y exists.
double payment_for_buy(Potential pot, PoolState x, double qty, const Tolerances& tol = kTol);

// Token-2 amount Y(X, Sell(q)): the greatest y <= x2 with phi(x1 + q, x2 - y) >= phi(X).
double proceeds_for_sell(Potential pot, PoolState x, double qty, const Tolerances& tol = kTol);

// Y(X, A) for either side; throws as the pricing functions do.
double order_amount(Potential pot, PoolState x, const Order& order, const Tolerances& tol = kTol);

bool potential_preserved(Potential pot, PoolState before, PoolState after,
                         const Tolerances& tol = kTol) noexcept;

bool can_execute(Potential pot, PoolState x, const Order& order, const Tolerances& tol = kTol) noexcept;

// Aborted results leave the state untouched and carry zero payment.
ExecResult execute_order(Potential pot, PoolState x, const Order& order,
                         const Tolerances& tol = kTol) noexcept;

// Token-2 reserve f(x1) on the level set {phi = level}.
// Throws NotOnLevelSet when no such reserve exists.
double generator_value(Potential pot, double level, double x1, const Tolerances& tol = kTol);

}  // namespace gsr
