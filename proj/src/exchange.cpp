#include "gsr/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsr/error.hpp"

namespace gsr {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidOrder: return "InvalidOrder";
        case ErrorCode::QuantityExceedsReserve: return "QuantityExceedsReserve";
        case ErrorCode::NoSolution: return "NoSolution";
        case ErrorCode::NotOnLevelSet: return "NotOnLevelSet";
        case ErrorCode::InvalidPermutation: return "InvalidPermutation";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::UnknownAgent: return "UnknownAgent";
        case ErrorCode::Violation: return "Violation";
        case ErrorCode::NotLiquidityPreserving: return "NotLiquidityPreserving";
        case ErrorCode::UserOrderInfeasible: return "UserOrderInfeasible";
        case ErrorCode::NTooSmall: return "NTooSmall";
        case ErrorCode::CaseTwoReached: return "CaseTwoReached";
        case ErrorCode::ProbeViolation: return "ProbeViolation";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::string_view to_string(Side side) noexcept { return side == Side::Buy ? "buy" : "sell"; }

std::string_view to_string(ExecStatus status) noexcept {
    return status == ExecStatus::Executed ? "executed" : "aborted";
}

std::string_view to_string(PotentialKind kind) noexcept {
    switch (kind) {
        case PotentialKind::Product: return "product";
        case PotentialKind::Additive: return "additive";
        case PotentialKind::Stable: return "stable";
    }
    return "unknown";
}

PotentialKind parse_potential_kind(std::string_view name) {
    if (name == "product") return PotentialKind::Product;
    if (name == "additive") return PotentialKind::Additive;
    if (name == "stable") return PotentialKind::Stable;
    throw Error(ErrorCode::ParseError, "unknown potential '" + std::string(name) + "'");
}

namespace {

void check_order_fields(double qty, double limit) {
    if (!(qty > 0.0) || !std::isfinite(qty)) {
        throw Error(ErrorCode::InvalidOrder, "quantity must be positive and finite");
    }
    if (!(limit >= 0.0)) {
        throw Error(ErrorCode::InvalidOrder, "limit price must be nonnegative");
    }
}

void check_quantity(double qty) {
    if (!(qty >= 0.0) || !std::isfinite(qty)) {
        throw Error(ErrorCode::InvalidOrder, "quantity must be nonnegative and finite");
    }
}

// Bisection on a predicate that is false at `lo` and true at `hi`; returns the true end.
template <typename Pred>
double bisect_true_end(double lo, double hi, Pred holds, const Tolerances& tol) {
    for (int i = 0; i < tol.root_iters && hi - lo > tol.root_abs; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        (holds(mid) ? hi : lo) = mid;
    }
    return hi;
}

constexpr double kBracketCap = 1e18;

}  // namespace

Order make_buy(double qty, double limit) {
    check_order_fields(qty, limit);
    return Order{Side::Buy, qty, limit};
}

Order make_sell(double qty, double limit) {
    check_order_fields(qty, limit);
    return Order{Side::Sell, qty, limit};
}

double eval_potential(Potential pot, PoolState x) noexcept {
    switch (pot.kind) {
        case PotentialKind::Product:
            return x.x1 * x.x2;
        case PotentialKind::Additive:
            return x.x1 + x.x2;
        case PotentialKind::Stable: {
            const double sum = x.x1 + x.x2;
            if (sum == 0.0) return 0.0;
            const double prod = x.x1 * x.x2;
            const double half = 0.5 * sum;
            const double w = prod / (half * half);
            return w * sum + (1.0 - w) * prod;
        }
    }
    return 0.0;
}

double payment_for_buy(Potential pot, PoolState x, double qty, const Tolerances& tol) {
    check_quantity(qty);
    if (qty > x.x1) {
        throw Error(ErrorCode::QuantityExceedsReserve, "buy quantity exceeds token-1 reserve");
    }
    if (qty == 0.0) return 0.0;

    switch (pot.kind) {
        case PotentialKind::Product: {
            const double left = x.x1 - qty;
            if (left <= 0.0) {
                throw Error(ErrorCode::NoSolution, "product pool cannot be drained of token 1");
            }
            // x1*x2/(x1-q) - x2 without the cancellation.
            return qty * x.x2 / left;
        }
        case PotentialKind::Additive:
            return qty;
        case PotentialKind::Stable: {
            const double target = eval_potential(pot, x);
            const double left = x.x1 - qty;
            auto holds = [&](double y) { return eval_potential(pot, {left, x.x2 + y}) >= target; };
            if (holds(0.0)) return 0.0;
            double hi = std::max(qty, 1.0);
            while (!holds(hi)) {
                hi *= 2.0;
                if (hi > kBracketCap) {
                    throw Error(ErrorCode::NoSolution, "no payment restores the stable potential");
                }
            }
            return bisect_true_end(0.0, hi, holds, tol);
        }
    }
    return 0.0;
}

double proceeds_for_sell(Potential pot, PoolState x, double qty, const Tolerances& tol) {
    check_quantity(qty);
    switch (pot.kind) {
        case PotentialKind::Product: {
            const double total = x.x1 + qty;
            if (total == 0.0) return 0.0;
            // x2 - x1*x2/(x1+q) without the cancellation.
            return qty * x.x2 / total;
        }
        case PotentialKind::Additive:
            return std::min(qty, x.x2);
        case PotentialKind::Stable: {
            const double target = eval_potential(pot, x);
            const double right = x.x1 + qty;
            auto holds = [&](double y) { return eval_potential(pot, {right, x.x2 - y}) >= target; };
            if (holds(x.x2)) return x.x2;
            if (!holds(0.0)) return 0.0;
            // `fails` is false at 0 and true at x2; its false end is the largest feasible y.
            double lo = 0.0;
            double hi = x.x2;
            for (int i = 0; i < tol.root_iters && hi - lo > tol.root_abs; ++i) {
                const double mid = lo + 0.5 * (hi - lo);
                if (mid <= lo || mid >= hi) break;
                (holds(mid) ? lo : hi) = mid;
            }
            return lo;
        }
    }
    return 0.0;
}

double order_amount(Potential pot, PoolState x, const Order& order, const Tolerances& tol) {
    return order.is_buy() ? payment_for_buy(pot, x, order.qty, tol)
                          : proceeds_for_sell(pot, x, order.qty, tol);
}

bool potential_preserved(Potential pot, PoolState before, PoolState after,
                         const Tolerances& tol) noexcept {
    const double a = eval_potential(pot, before);
    const double b = eval_potential(pot, after);
    return std::abs(b - a) <= tol.potential_rel * std::abs(a);
}

namespace {

// Next state if `order` passes every feasibility constraint at `x`.
bool try_execute(Potential pot, PoolState x, const Order& order, const Tolerances& tol,
                 double& amount, PoolState& next) noexcept {
    if (!(order.qty > 0.0)) return false;
    try {
        if (order.is_buy()) {
            if (order.qty > x.x1) return false;
            amount = payment_for_buy(pot, x, order.qty, tol);
            if (amount > order.limit_amount()) return false;
            next = {x.x1 - order.qty, x.x2 + amount};
        } else {
            amount = proceeds_for_sell(pot, x, order.qty, tol);
            if (amount < order.limit_amount()) return false;
            if (x.x2 < amount) return false;
            next = {x.x1 + order.qty, x.x2 - amount};
        }
    } catch (const Error&) {
        return false;
    }
    return potential_preserved(pot, x, next, tol);
}

}  // namespace

bool can_execute(Potential pot, PoolState x, const Order& order, const Tolerances& tol) noexcept {
    double amount = 0.0;
    PoolState next;
    return try_execute(pot, x, order, tol, amount, next);
}

ExecResult execute_order(Potential pot, PoolState x, const Order& order,
                         const Tolerances& tol) noexcept {
    double amount = 0.0;
    PoolState next;
    if (!try_execute(pot, x, order, tol, amount, next)) {
        return ExecResult{ExecStatus::Aborted, 0.0, x};
    }
    return ExecResult{ExecStatus::Executed, amount, next};
}

double generator_value(Potential pot, double level, double x1, const Tolerances& tol) {
    switch (pot.kind) {
        case PotentialKind::Product:
            if (!(x1 > 0.0) || !(level > 0.0)) {
                throw Error(ErrorCode::NotOnLevelSet, "product level set needs x1 > 0 and level > 0");
            }
            return level / x1;
        case PotentialKind::Additive: {
            const double x2 = level - x1;
            if (!(x1 >= 0.0) || !(x2 >= 0.0)) {
                throw Error(ErrorCode::NotOnLevelSet, "additive level set has no point at this x1");
            }
            return x2;
        }
        case PotentialKind::Stable: {
            if (!(x1 > 0.0) || !(level > 0.0)) {
                throw Error(ErrorCode::NotOnLevelSet, "stable level set needs x1 > 0 and level > 0");
            }
            auto holds = [&](double x2) { return eval_potential(pot, {x1, x2}) >= level; };
            double hi = std::max(level, 1.0);
            while (!holds(hi)) {
                hi *= 2.0;
                if (hi > kBracketCap) {
                    throw Error(ErrorCode::NotOnLevelSet, "stable level set unbounded at this x1");
                }
            }
            return bisect_true_end(0.0, hi, holds, tol);
        }
    }
    return 0.0;
}

}  // namespace gsr
