#include "gsr/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"
#include "gsr/game.hpp"

namespace gsr {

std::string_view to_string(DualitySide side) noexcept {
    return side == DualitySide::BuysBetterAtX ? "buys-better-at-x" : "sells-better-at-x";
}

PoolState level_point(Potential pot, double level, double x1, const Tolerances& tol) {
    return PoolState{x1, generator_value(pot, level, x1, tol)};
}

namespace {

bool leq_within(double a, double b, double tol) {
    return a <= b + tol * std::max(1.0, std::abs(b));
}

void require_on_level(Potential pot, double level, PoolState x, const Tolerances& tol) {
    if (!(std::abs(eval_potential(pot, x) - level) <= tol.potential_rel * std::max(1.0, std::abs(level)))) {
        throw Error(ErrorCode::NotOnLevelSet, "state is not on the requested level set");
    }
}

}  // namespace

bool check_pricing_lemma(Potential pot, double level, double x1_low, double x1_high, double qty,
                         const Tolerances& tol) {
    const PoolState low = level_point(pot, level, x1_low, tol);
    const PoolState high = level_point(pot, level, x1_high, tol);
    const Order buy = make_buy(qty);
    const Order sell = make_sell(qty);

    if (can_execute(pot, high, buy, tol) && can_execute(pot, low, buy, tol)) {
        if (!leq_within(payment_for_buy(pot, high, qty, tol), payment_for_buy(pot, low, qty, tol), tol.cmp)) {
            return false;
        }
    }
    if (can_execute(pot, high, sell, tol) && can_execute(pot, low, sell, tol)) {
        if (!leq_within(proceeds_for_sell(pot, high, qty, tol), proceeds_for_sell(pot, low, qty, tol), tol.cmp)) {
            return false;
        }
    }
    return true;
}

DualitySide check_duality(Potential pot, double level, PoolState x, PoolState x_prime,
                          std::span<const Order> probes, const Tolerances& tol) {
    require_on_level(pot, level, x, tol);
    require_on_level(pot, level, x_prime, tol);
    const DualitySide side = x.x1 >= x_prime.x1 ? DualitySide::BuysBetterAtX : DualitySide::SellsBetterAtX;
    const Side favoured = side == DualitySide::BuysBetterAtX ? Side::Buy : Side::Sell;
    for (const Order& probe : probes) {
        if (probe.side != favoured) continue;
        if (!better_execution(pot, probe, x, x_prime, tol)) {
            throw Error(ErrorCode::ProbeViolation, "probe executes worse on the favoured side");
        }
    }
    return side;
}

std::vector<SlopeSample> slope_samples(Potential pot, double level, std::span<const double> xs,
                                       const Tolerances& tol) {
    std::vector<double> f(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) f[i] = generator_value(pot, level, xs[i], tol);
    std::vector<SlopeSample> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            if (xs[i] == xs[j]) continue;
            out.push_back({xs[i], xs[j], (f[j] - f[i]) / (xs[j] - xs[i])});
        }
    }
    return out;
}

bool check_slope_monotone(Potential pot, double level, std::span<const double> sorted_xs,
                          const Tolerances& tol) {
    const std::size_t n = sorted_xs.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = generator_value(pot, level, sorted_xs[i], tol);
    auto slope = [&](std::size_t i, std::size_t j) {
        return (f[j] - f[i]) / (sorted_xs[j] - sorted_xs[i]);
    };
    // R is symmetric, so fixing the first argument and sweeping the second covers both.
    for (std::size_t i = 0; i < n; ++i) {
        bool have_prev = false;
        double prev = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (sorted_xs[j] == sorted_xs[i]) continue;
            const double r = slope(i, j);
            if (have_prev && !leq_within(prev, r, tol.cmp)) return false;
            prev = r;
            have_prev = true;
        }
    }
    return true;
}

}  // namespace gsr
