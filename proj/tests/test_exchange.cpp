#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"
#include "gsr/instances.hpp"

using namespace gsr;
using doctest::Approx;

namespace {

// Closed forms for the constant-product pool, written out independently of the library.
double cp_buy(double x1, double x2, double q) { return x1 * x2 / (x1 - q) - x2; }
double cp_sell(double x1, double x2, double q) { return x2 - x1 * x2 / (x1 + q); }

double stable_phi(double a, double b) {
    const double s = a + b;
    if (s == 0.0) return 0.0;
    const double w = a * b / ((s / 2) * (s / 2));
    return w * s + (1 - w) * a * b;
}

}  // namespace

TEST_CASE("potential evaluation") {
    CHECK(eval_potential(kProduct, {10, 10}) == 100.0);
    CHECK(eval_potential(kAdditive, {3, 4}) == 7.0);
    CHECK(eval_potential(kStable, {8, 8}) == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(eval_potential(kStable, {0, 0}) == 0.0);
    CHECK(eval_potential(kStable, {1.3, 0.7}) == stable_phi(1.3, 0.7));
}

TEST_CASE("stable potential is only regular on small reserves") {
    // Inside the box it grows with each reserve; outside it does not.
    CHECK(eval_potential(kStable, {1.0, 1.5}) > eval_potential(kStable, {1.0, 1.4}));
    CHECK(eval_potential(kStable, {69, 50}) > eval_potential(kStable, {70, 70}));
    CHECK(eval_potential(kStable, {70, 50}) > eval_potential(kStable, {70, 70}));
}

TEST_CASE("constant-product pricing matches closed forms") {
    CHECK(std::abs(payment_for_buy(kProduct, {100, 100}, 10) - 100.0 * 100.0 / 90.0 + 100.0) <= 1e-9);
    CHECK(std::abs(proceeds_for_sell(kProduct, {100, 100}, 10) - 9.090909090909091) <= 1e-9);
    for (double q : {0.5, 3.0, 42.0, 99.0}) {
        CHECK(payment_for_buy(kProduct, {100, 250}, q) == Approx(cp_buy(100, 250, q)).epsilon(1e-12));
        CHECK(proceeds_for_sell(kProduct, {100, 250}, q) == Approx(cp_sell(100, 250, q)).epsilon(1e-12));
    }
}

TEST_CASE("additive pricing") {
    CHECK(payment_for_buy(kAdditive, {100, 100}, 10) == 10.0);
    CHECK(proceeds_for_sell(kAdditive, {100, 100}, 10) == 10.0);
    CHECK(proceeds_for_sell(kAdditive, {5, 5}, 8) == 5.0);
}

TEST_CASE("zero quantity costs nothing") {
    for (Potential pot : {kProduct, kAdditive, kStable}) {
        CHECK(payment_for_buy(pot, {1.2, 0.8}, 0.0) == 0.0);
        CHECK(proceeds_for_sell(pot, {1.2, 0.8}, 0.0) == 0.0);
    }
}

TEST_CASE("pricing errors") {
    CHECK_THROWS_AS(payment_for_buy(kProduct, {100, 100}, 150), Error);
    try {
        payment_for_buy(kProduct, {100, 100}, 150);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::QuantityExceedsReserve);
    }
    try {
        payment_for_buy(kProduct, {100, 100}, 100);
        FAIL("draining the pool should have no finite price");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSolution);
    }
    CHECK_THROWS_AS(make_buy(0.0), Error);
    CHECK_THROWS_AS(make_sell(1.0, -1.0), Error);
}

TEST_CASE("stable bisection preserves the potential and brackets the root") {
    const PoolState x{1.1, 0.9};
    const double y = payment_for_buy(kStable, x, 0.2);
    CHECK(stable_phi(0.9, 0.9 + y) >= stable_phi(1.1, 0.9) * (1 - 1e-9));
    CHECK(stable_phi(0.9, 0.9 + y - 1e-6) < stable_phi(1.1, 0.9));
    const double r = proceeds_for_sell(kStable, x, 0.2);
    CHECK(stable_phi(1.3, 0.9 - r) >= stable_phi(1.1, 0.9) * (1 - 1e-9));
    CHECK(stable_phi(1.3, 0.9 - r - 1e-6) < stable_phi(1.1, 0.9));
}

TEST_CASE("can_execute") {
    CHECK_FALSE(can_execute(kProduct, {100, 100}, make_buy(10, 1.0)));
    CHECK_FALSE(can_execute(kProduct, {100, 100}, make_buy(150)));
    CHECK(can_execute(kProduct, {100, 100}, make_buy(10)));
    CHECK(can_execute(kProduct, {100, 100}, make_sell(10, 0.9)));
    CHECK_FALSE(can_execute(kProduct, {100, 100}, make_sell(10, 0.95)));
    // An additive sell larger than the token-2 reserve cannot keep the level.
    CHECK_FALSE(can_execute(kAdditive, {5, 5}, make_sell(8)));
}

TEST_CASE("execute_order") {
    const ExecResult a = execute_order(kProduct, {100, 100}, make_buy(10));
    CHECK(a.executed());
    CHECK(a.next.x1 == 90.0);
    CHECK(a.next.x2 == Approx(111.111111111).epsilon(1e-10));

    const PoolState x{100, 100};
    const ExecResult b = execute_order(kProduct, x, make_buy(10, 1.0));
    CHECK_FALSE(b.executed());
    CHECK(b.next == x);
    CHECK(b.payment == 0.0);

    const ExecResult c = execute_order(kAdditive, {5, 5}, make_sell(3));
    CHECK(c.executed());
    CHECK(c.next == PoolState{8, 2});
}

TEST_CASE("generator values") {
    CHECK(generator_value(kProduct, 10000, 50) == Approx(200.0));
    CHECK(generator_value(kAdditive, 200, 50) == Approx(150.0));
    CHECK(generator_value(kProduct, 10000, 100) == Approx(100.0));
    CHECK(eval_potential(kStable, {1.2, generator_value(kStable, 1.9, 1.2)}) == Approx(1.9).epsilon(1e-10));
    CHECK_THROWS_AS(generator_value(kAdditive, 200, 250), Error);
}

TEST_CASE("executions stay on the level set") {
    for (std::uint64_t i = 0; i < 500; ++i) {
        Rng rng = trial_rng(7, 11, i);
        const Potential pot = random_potential(rng);
        const PoolState x = random_state(rng, pot);
        const Order o = random_order(rng, pot, x, 0.3);
        const ExecResult r = execute_order(pot, x, o);
        if (!r.executed()) {
            CHECK(r.next == x);
            continue;
        }
        const double before = eval_potential(pot, x);
        CHECK(std::abs(eval_potential(pot, r.next) - before) <= 1e-9 * std::max(1.0, before));
    }
}
