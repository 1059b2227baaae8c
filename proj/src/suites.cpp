#include "gsr/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "gsr/adversary.hpp"
#include "gsr/analysis.hpp"
#include "gsr/error.hpp"
#include "gsr/exchange.hpp"
#include "gsr/game.hpp"
#include "gsr/instances.hpp"
#include "gsr/sequencing.hpp"

namespace gsr {

namespace {

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Runs `check(rng, trial)` for every trial; a thrown library Error counts as a violation.
template <typename Check>
InvariantTally run_trials(std::string_view suite, std::string_view name, std::uint64_t trials,
                          const SuiteConfig& config, Check check) {
    const std::uint64_t stream = fnv1a(name);
    const auto n = static_cast<std::int64_t>(trials);
    std::uint64_t violations = 0;
    std::int64_t first = std::numeric_limits<std::int64_t>::max();

    auto one = [&](std::int64_t i) {
        Rng rng = trial_rng(config.seed, stream, static_cast<std::uint64_t>(i));
        try {
            return check(rng, static_cast<std::uint64_t>(i));
        } catch (const Error&) {
            return false;
        }
    };

    if (config.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : violations) reduction(min : first)
        for (std::int64_t i = 0; i < n; ++i) {
            if (!one(i)) {
                ++violations;
                first = std::min(first, i);
            }
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            if (!one(i)) {
                ++violations;
                first = std::min(first, i);
            }
        }
    }
    return InvariantTally{std::string(suite), std::string(name), trials, violations,
                          violations == 0 ? -1 : first};
}

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool leq_rel(double a, double b, double tol = kTol.cmp) {
    return a <= b + tol * std::max(1.0, std::abs(b));
}

// Executes `order` at `x` and reports whether the result stays where the potential is regular.
bool regular_trade(Potential pot, PoolState x, const Order& order) {
    const ExecResult r = execute_order(pot, x, order);
    return in_regular_domain(pot, r.next);
}

// Both market trades of size q at x stay in the regular domain.
bool regular_market_trades(Potential pot, PoolState x, double qty) {
    return regular_trade(pot, x, Order{Side::Buy, qty, kInf}) && regular_trade(pot, x, Order{Side::Sell, qty, 0.0});
}

// Token-1 reserve on the same level set as x, within [lo, hi] * x1 (additive kept in range).
double nearby_x1(Rng& rng, Potential pot, PoolState x, double lo, double hi) {
    const double level = eval_potential(pot, x);
    double v = x.x1 * uniform(rng, lo, hi);
    if (pot.kind == PotentialKind::Additive) v = std::min(v, 0.98 * level);
    return v;
}

template <typename Draw>
auto redraw_until(Rng& rng, Draw draw) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        if (auto v = draw(rng)) return *v;
    }
    throw Error(ErrorCode::NoSolution, "could not draw a regular instance");
}

std::vector<Order> regular_probes(Rng& rng, Potential pot, PoolState a, PoolState b, std::size_t count) {
    std::vector<Order> probes = random_probes(rng, pot, b, count);
    if (pot.kind != PotentialKind::Stable) return probes;
    std::erase_if(probes, [&](const Order& o) { return !regular_trade(pot, a, o) || !regular_trade(pot, b, o); });
    return probes;
}

bool mixed_suffix(const Block& block, const ExecutionOrdering& ordering, std::size_t t) {
    bool buy = false;
    bool sell = false;
    for (std::size_t u = t; u < ordering.size(); ++u) {
        (block.order(ordering[u]).is_buy() ? buy : sell) = true;
    }
    return buy && sell;
}

}  // namespace

double grid_scan_payment(Potential pot, PoolState x, double qty, double span) {
    const double target = eval_potential(pot, x);
    const double step = span * 1e-6;
    const PoolState base{x.x1 - qty, x.x2};
    if (eval_potential(pot, base) >= target) return 0.0;
    for (std::int64_t k = 1; k <= 1'000'000; ++k) {
        if (eval_potential(pot, {base.x1, base.x2 + static_cast<double>(k) * step}) >= target) {
            return (static_cast<double>(k) - 0.5) * step;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double grid_scan_proceeds(Potential pot, PoolState x, double qty) {
    const double target = eval_potential(pot, x);
    const double step = x.x2 * 1e-6;
    const double x1 = x.x1 + qty;
    // First grid amount whose withdrawal breaks the potential.
    for (std::int64_t k = 1; k <= 1'000'000; ++k) {
        if (eval_potential(pot, {x1, x.x2 - static_cast<double>(k) * step}) < target) {
            return (static_cast<double>(k) - 0.5) * step;
        }
    }
    return x.x2;
}

bool is_suite_name(std::string_view name) noexcept {
    const auto names = suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::string_view> suite_names() {
    return {"pricing", "duality", "greedy", "impossibility", "sandwich", "all"};
}

std::vector<InvariantTally> run_suite(std::string_view name, const SuiteConfig& config) {
    if (name == "pricing") return pricing_suite(config);
    if (name == "duality") return duality_suite(config);
    if (name == "greedy") return greedy_suite(config);
    if (name == "impossibility") return impossibility_suite(config);
    if (name == "sandwich") return sandwich_suite(config);
    if (name == "all") {
        std::vector<InvariantTally> all;
        for (std::string_view s : {"pricing", "duality", "greedy", "impossibility", "sandwich"}) {
            auto part = run_suite(s, config);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw Error(ErrorCode::ParseError, "unknown suite '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// pricing

InvariantTally stable_solver_grid_check(const SuiteConfig& config) {
    const std::uint64_t trials = std::min<std::uint64_t>(config.trials, 1000);
    return run_trials("pricing", "stable_solver_grid", trials, config, [](Rng& rng, std::uint64_t) {
        const auto [x, qty] = redraw_until(rng, [](Rng& r) -> std::optional<std::pair<PoolState, double>> {
            const PoolState s = random_state(r, kStable);
            const double q = random_quantity(r, s, 0.3);
            if (!regular_market_trades(kStable, s, q)) return std::nullopt;
            return std::pair{s, q};
        });
        const double pay = payment_for_buy(kStable, x, qty);
        const double pay_grid = grid_scan_payment(kStable, x, qty, kStableRegularBound - x.x2);
        const double get = proceeds_for_sell(kStable, x, qty);
        const double get_grid = grid_scan_proceeds(kStable, x, qty);
        return close_abs(pay, pay_grid, 1e-6) && close_abs(get, get_grid, 1e-6);
    });
}

std::vector<InvariantTally> pricing_suite(const SuiteConfig& config) {
    std::vector<InvariantTally> out;
    const std::uint64_t n = config.trials;

    out.push_back(run_trials("pricing", "pricing_lemma", n, config, [](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        struct Draw { double level, low, high, qty; };
        const Draw d = redraw_until(rng, [&](Rng& r) -> std::optional<Draw> {
            const PoolState x = random_state(r, pot);
            const double level = eval_potential(pot, x);
            double a = nearby_x1(r, pot, x, 0.6, 1.4);
            double b = nearby_x1(r, pot, x, 0.6, 1.4);
            if (a > b) std::swap(a, b);
            const PoolState pa = level_point(pot, level, a);
            const PoolState pb = level_point(pot, level, b);
            const double qty = uniform(r, 0.01, 0.5) * std::min({pa.x1, pa.x2, pb.x1, pb.x2});
            if (!in_regular_domain(pot, pa) || !in_regular_domain(pot, pb)) return std::nullopt;
            if (!regular_market_trades(pot, pa, qty) || !regular_market_trades(pot, pb, qty)) return std::nullopt;
            return Draw{level, a, b, qty};
        });
        return check_pricing_lemma(pot, d.level, d.low, d.high, d.qty);
    }));

    out.push_back(run_trials("pricing", "zero_payment", n, config, [](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        const PoolState x = random_state(rng, pot);
        return std::abs(proceeds_for_sell(pot, x, 0.0)) <= kTol.cmp && payment_for_buy(pot, x, 0.0) == 0.0;
    }));

    out.push_back(run_trials("pricing", "slope_monotone", n, config, [](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        struct Draw { double level; std::vector<double> xs; };
        const Draw d = redraw_until(rng, [&](Rng& r) -> std::optional<Draw> {
            const PoolState x = random_state(r, pot);
            const double level = eval_potential(pot, x);
            const int k = std::uniform_int_distribution<int>(4, 8)(r);
            std::vector<double> xs;
            for (int i = 0; i < k; ++i) xs.push_back(nearby_x1(r, pot, x, 0.5, 1.5));
            std::sort(xs.begin(), xs.end());
            for (std::size_t i = 1; i < xs.size(); ++i) {
                if (xs[i] - xs[i - 1] < 1e-3 * x.x1) return std::nullopt;
            }
            for (double v : xs) {
                if (!in_regular_domain(pot, level_point(pot, level, v))) return std::nullopt;
            }
            return Draw{level, std::move(xs)};
        });
        return check_slope_monotone(pot, d.level, d.xs);
    }));

    out.push_back(run_trials("pricing", "round_trip_bound", n, config, [](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        const PoolState x = random_state(rng, pot);
        const double qty = random_quantity(rng, x, 0.5);
        const ExecResult buy = execute_order(pot, x, Order{Side::Buy, qty, kInf});
        if (!buy.executed()) return true;
        return leq_rel(proceeds_for_sell(pot, buy.next, qty), buy.payment);
    }));

    out.push_back(run_trials("pricing", "generator_bijective", n, config, [](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        const PoolState x = redraw_until(rng, [&](Rng& r) -> std::optional<PoolState> {
            const PoolState s = random_state(r, pot);
            if (pot.kind == PotentialKind::Stable && eval_potential(pot, s) > 2.0) return std::nullopt;
            return s;
        });
        const double level = eval_potential(pot, x);
        std::array<double, 5> xs{};
        for (double& v : xs) v = nearby_x1(rng, pot, x, 0.7, 1.3);
        std::sort(xs.begin(), xs.end());
        double prev = std::numeric_limits<double>::infinity();
        double prev_x = -1.0;
        for (double v : xs) {
            const double f = generator_value(pot, level, v);
            // The potentials are symmetric, so f is its own inverse.
            if (std::abs(generator_value(pot, level, f) - v) > 1e-9 * std::max(1.0, v)) return false;
            if (v > prev_x && !(f < prev)) return false;
            prev = f;
            prev_x = v;
        }
        return true;
    }));

    out.push_back(run_trials("pricing", "potential_conservation", n, config, [](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        const PoolState x = random_state(rng, pot);
        const Order order = random_order(rng, pot, x, 0.6);
        const ExecResult r = execute_order(pot, x, order);
        if (!r.executed()) return r.next == x && r.payment == 0.0;
        const double before = eval_potential(pot, x);
        return std::abs(eval_potential(pot, r.next) - before) <= kTol.potential_rel * std::abs(before) &&
               r.next.x1 >= 0.0 && r.next.x2 >= 0.0;
    }));

    out.push_back(run_trials("pricing", "stable_increasing", n, config, [](Rng& rng, std::uint64_t) {
        const PoolState x{uniform(rng, 0.01, 1.9), uniform(rng, 0.01, 1.9)};
        const double delta = uniform(rng, 1e-3, 0.1);
        const double base = eval_potential(kStable, x);
        return eval_potential(kStable, {x.x1 + delta, x.x2}) > base &&
               eval_potential(kStable, {x.x1, x.x2 + delta}) > base;
    }));

    out.push_back(stable_solver_grid_check(config));
    return out;
}

// ---------------------------------------------------------------------------
// duality

std::vector<InvariantTally> duality_suite(const SuiteConfig& config) {
    std::vector<InvariantTally> out;
    const std::uint64_t n = config.trials;

    struct Pair { double level; PoolState a, b; };
    auto draw_pair = [](Rng& rng, Potential pot) {
        return redraw_until(rng, [&](Rng& r) -> std::optional<Pair> {
            const PoolState x = random_state(r, pot);
            const double level = eval_potential(pot, x);
            const PoolState a = level_point(pot, level, nearby_x1(r, pot, x, 0.6, 1.4));
            const PoolState b = level_point(pot, level, nearby_x1(r, pot, x, 0.6, 1.4));
            if (!in_regular_domain(pot, a) || !in_regular_domain(pot, b)) return std::nullopt;
            return Pair{level, a, b};
        });
    };

    out.push_back(run_trials("duality", "duality_theorem", n, config, [&](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        const Pair p = draw_pair(rng, pot);
        const std::vector<Order> probes = regular_probes(rng, pot, p.a, p.b, 10);
        const DualitySide side = check_duality(pot, p.level, p.a, p.b, probes);
        return side == (p.a.x1 >= p.b.x1 ? DualitySide::BuysBetterAtX : DualitySide::SellsBetterAtX);
    }));

    out.push_back(run_trials("duality", "monotone_feasibility", n, config, [&](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        const Pair p = draw_pair(rng, pot);
        const PoolState low = p.a.x1 <= p.b.x1 ? p.a : p.b;
        const PoolState high = p.a.x1 <= p.b.x1 ? p.b : p.a;
        const std::vector<Order> probes = regular_probes(rng, pot, low, high, 10);
        for (const Order& o : probes) {
            // Buys that execute at lower token-1 reserves execute at higher ones; sells dually.
            if (o.is_buy() && can_execute(pot, low, o) && !can_execute(pot, high, o)) return false;
            if (o.is_sell() && can_execute(pot, high, o) && !can_execute(pot, low, o)) return false;
        }
        return true;
    }));

    out.push_back(run_trials("duality", "generator_domain_convex", n, config, [](Rng& rng, std::uint64_t) {
        const Potential pot = random_potential(rng);
        const PoolState x = random_state(rng, pot);
        const double level = eval_potential(pot, x);
        const double span = pot.kind == PotentialKind::Additive ? level : 2.0 * x.x1;
        double a = uniform(rng, -0.2, 1.2) * span;
        double b = uniform(rng, -0.2, 1.2) * span;
        if (a > b) std::swap(a, b);
        auto defined = [&](double v) {
            try {
                generator_value(pot, level, v);
                return true;
            } catch (const Error&) {
                return false;
            }
        };
        if (!defined(a) || !defined(b)) return true;
        for (int i = 1; i <= 5; ++i) {
            if (!defined(a + (b - a) * i / 6.0)) return false;
        }
        return true;
    }));
    return out;
}

// ---------------------------------------------------------------------------
// greedy

InvariantTally verifier_soundness_check(const SuiteConfig& config, std::size_t max_orders) {
    const std::uint64_t trials = std::max<std::uint64_t>(1, config.trials / 50);
    return run_trials("greedy", "verifier_soundness", trials, config, [max_orders](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, max_orders);
        for (OriginTie tie : {OriginTie::EitherSide, OriginTie::BuyOnly}) {
            GreedyOptions opts;
            opts.origin_tie = tie;
            if (enumerate_greedy_orderings(inst.pot, inst.x0, inst.block, max_orders, opts) !=
                reachable_greedy_orderings(inst.pot, inst.x0, inst.block, max_orders, opts)) {
                return false;
            }
        }
        return true;
    });
}

std::vector<InvariantTally> greedy_suite(const SuiteConfig& config) {
    std::vector<InvariantTally> out;
    const std::uint64_t n = config.trials;
    constexpr std::size_t kMaxBlock = 12;

    out.push_back(run_trials("greedy", "verifier_completeness", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, kMaxBlock);
        for (int kind = 0; kind < 3; ++kind) {
            GreedyOptions opts;
            opts.tie_break = TieBreak{static_cast<TieBreak::Kind>(kind), rng()};
            const ExecutionOrdering ordering = greedy_sequence(inst.pot, inst.x0, inst.block, opts);
            for (OriginTie tie : {OriginTie::EitherSide, OriginTie::BuyOnly}) {
                opts.origin_tie = tie;
                if (!verify_greedy(inst.pot, inst.x0, inst.block, ordering, opts)) return false;
            }
        }
        return true;
    }));

    out.push_back(verifier_soundness_check(config));

    out.push_back(run_trials("greedy", "alternation", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, 8);
        std::vector<ExecutionOrdering> candidates{inst.outcome.ordering};
        std::vector<std::size_t> perm = inst.outcome.ordering.sequence();
        for (int i = 0; i < 8; ++i) {
            std::shuffle(perm.begin(), perm.end(), rng);
            candidates.emplace_back(perm);
        }
        for (const ExecutionOrdering& ord : candidates) {
            if (!verify_greedy(inst.pot, inst.x0, inst.block, ord)) continue;
            const Outcome trace = execute_ordering(inst.pot, inst.x0, inst.block, ord);
            for (std::size_t t = 0; t < ord.size() && mixed_suffix(inst.block, ord, t); ++t) {
                const double diff = trace.state_before(t).x1 - inst.x0.x1;
                const bool buy = inst.block.order(ord[t]).is_buy();
                if (diff > 0.0 && !buy) return false;
                if (diff < 0.0 && buy) return false;
            }
        }
        return true;
    }));

    out.push_back(run_trials("greedy", "linear_cost", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, kMaxBlock);
        const GreedyRun run = greedy_sequence_counted(inst.pot, inst.x0, inst.block, inst.opts);
        return run.executions <= inst.block.size();
    }));

    out.push_back(run_trials("greedy", "tail_same_side", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, kMaxBlock);
        return core_tail_decompose(inst.pot, inst.block, inst.outcome).tail_single_side(inst.block);
    }));

    out.push_back(run_trials("greedy", "theorem_greedy", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, kMaxBlock);
        for (std::size_t i = 0; i < inst.block.size(); ++i) {
            const AgentId owner = inst.block.owner(i);
            if (owner == kMiner) continue;
            classify_theorem_greedy(inst.pot, inst.block, inst.outcome, owner);
        }
        return true;
    }));

    // Market orders that all execute: removing one order cannot make another switch
    // from aborted to executed.
    out.push_back(run_trials("greedy", "theorem_greedy_no_aborts", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = redraw_until(rng, [](Rng& r) -> std::optional<GreedyInstance> {
            GreedyInstance g = random_greedy_instance(r, kMaxBlock, 1.0);
            const bool all_ran = std::all_of(g.outcome.results.begin(), g.outcome.results.end(),
                                             [](const ExecResult& e) { return e.executed(); });
            if (!all_ran) return std::nullopt;
            return g;
        });
        for (std::size_t i = 0; i < inst.block.size(); ++i) {
            const AgentId owner = inst.block.owner(i);
            if (owner == kMiner) continue;
            classify_theorem_greedy(inst.pot, inst.block, inst.outcome, owner);
        }
        return true;
    }));

    out.push_back(run_trials("greedy", "isolation_payments", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, kMaxBlock);
        const CoreTail split = core_tail_decompose(inst.pot, inst.block, inst.outcome);
        for (std::size_t t = 0; t < inst.outcome.size(); ++t) {
            const std::size_t index = inst.outcome.ordering[t];
            if (std::find(split.core.begin(), split.core.end(), index) == split.core.end()) continue;
            const Order& order = inst.block.order(index);
            const ExecResult alone = execute_order(inst.pot, inst.x0, order);
            const ExecResult real = inst.outcome.results[t];
            if (!alone.executed() || !real.executed()) continue;
            if (order.is_buy() ? !leq_rel(real.payment, alone.payment) : !leq_rel(alone.payment, real.payment)) {
                return false;
            }
        }
        return true;
    }));

    out.push_back(run_trials("greedy", "token_conservation", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, kMaxBlock);
        std::vector<AgentId> agents(inst.block.owners().begin(), inst.block.owners().end());
        agents.push_back(kMiner);
        std::sort(agents.begin(), agents.end());
        agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
        UtilityVector sum;
        for (AgentId a : agents) sum += agent_utility(inst.outcome, inst.block, a);
        const PoolState end = inst.outcome.final_state();
        return close_abs(sum.d1 + (end.x1 - inst.x0.x1), 0.0, 1e-6) &&
               close_abs(sum.d2 + (end.x2 - inst.x0.x2), 0.0, 1e-6);
    }));

    out.push_back(run_trials("greedy", "duality_at_trace_states", n, config, [](Rng& rng, std::uint64_t) {
        const GreedyInstance inst = random_greedy_instance(rng, kMaxBlock);
        const double level = eval_potential(inst.pot, inst.x0);
        const ExecutionOrdering& ord = inst.outcome.ordering;
        for (std::size_t t = 0; t < ord.size() && mixed_suffix(inst.block, ord, t); ++t) {
            const PoolState at = inst.outcome.state_before(t);
            const std::vector<Order> probes = regular_probes(rng, inst.pot, at, inst.x0, 4);
            const DualitySide side = check_duality(inst.pot, level, at, inst.x0, probes);
            if ((side == DualitySide::BuysBetterAtX) != (at.x1 >= inst.x0.x1)) return false;
        }
        return true;
    }));
    return out;
}

// ---------------------------------------------------------------------------
// impossibility

std::vector<InvariantTally> impossibility_suite(const SuiteConfig& config) {
    std::vector<InvariantTally> out;
    std::uint64_t z_trials = 0;
    std::uint64_t z_violations = 0;
    for (int n : {3, 4, 5}) {
        const ImpossibilityInstance inst = impossibility_block(n);
        const auto patterns = side_patterns(n);
        const std::string name = "exploit_n" + std::to_string(n);
        out.push_back(run_trials("impossibility", name, patterns.size(), config,
                                 [&](Rng&, std::uint64_t i) {
            const ExecutionOrdering ord = pattern_ordering(inst.block, patterns[i]);
            const ExploitSelection sel = select_exploit(kProduct, inst.x0, inst.block, ord);
            const Block owned = assign_exploit_ownership(inst.block, sel);
            const Outcome trace = execute_ordering(kProduct, inst.x0, owned, ord);
            const bool all_ran = std::all_of(trace.results.begin(), trace.results.end(),
                                             [](const ExecResult& r) { return r.executed(); });
            const UtilityVector u = agent_utility(trace, owned, kMiner);
            return all_ran && std::abs(u.d1) <= 1e-9 && u.d2 > 1e-9;
        }));
        const InvariantTally z = run_trials("impossibility", "z_trace_algebra", patterns.size(), config,
                                            [&](Rng&, std::uint64_t i) {
            const ExecutionOrdering ord = pattern_ordering(inst.block, patterns[i]);
            const Outcome trace = execute_ordering(kProduct, inst.x0, inst.block, ord);
            double z = 0.0;
            for (std::size_t t = 0; t < ord.size(); ++t) {
                z += inst.block.order(ord[t]).is_sell() ? 1.0 : -2.0;
                if (trace.states[t].x1 - inst.x0.x1 != z) return false;
            }
            return z == -static_cast<double>(n);
        });
        z_trials += z.trials;
        z_violations += z.violations;
    }
    out.push_back(InvariantTally{"impossibility", "z_trace_algebra", z_trials, z_violations,
                                 z_violations == 0 ? -1 : 0});
    return out;
}

// ---------------------------------------------------------------------------
// sandwich

std::vector<InvariantTally> sandwich_suite(const SuiteConfig& config) {
    std::vector<InvariantTally> out;
    const std::uint64_t n = config.trials;

    struct Target { Potential pot; PoolState x; Order user; };
    auto draw_target = [](Rng& rng) {
        const Potential pot = std::bernoulli_distribution(0.5)(rng) ? kProduct : kStable;
        const PoolState x = random_state(rng, pot);
        const double qty = random_quantity(rng, x, 0.3);
        const double standalone = payment_for_buy(pot, x, qty) / qty;
        return Target{pot, x, make_buy(qty, standalone * uniform(rng, 1.0, 3.0))};
    };

    out.push_back(run_trials("sandwich", "sandwich_correctness", n, config, [&](Rng& rng, std::uint64_t) {
        const Target tg = draw_target(rng);
        const SandwichPlan plan = plan_sandwich(tg.pot, tg.x, tg.user);
        const Game game = sandwich_game(tg.pot, tg.x, tg.user, plan.w);
        const UtilityVector miner = agent_utility(game.outcome, game.block, kMiner);
        const UtilityVector user = agent_utility(game.outcome, game.block, 1);
        const double expected = tg.user.limit_amount() - payment_for_buy(tg.pot, tg.x, tg.user.qty);
        return close_abs(miner.d1, 0.0, 1e-6) && close_abs(miner.d2, expected, 1e-6) &&
               close_abs(plan.predicted_profit, expected, kTol.cmp * std::max(1.0, expected)) &&
               close_abs(-user.d2, tg.user.limit_amount(), 1e-6) && close_abs(user.d1, tg.user.qty, 1e-9);
    }));

    out.push_back(run_trials("sandwich", "greedy_rejects_sandwich", n, config, [&](Rng& rng, std::uint64_t) {
        const Target tg = draw_target(rng);
        const SandwichPlan plan = plan_sandwich(tg.pot, tg.x, tg.user);
        if (!plan.has_miner_orders()) return true;
        const Game game = sandwich_game(tg.pot, tg.x, tg.user, plan.w);
        for (OriginTie tie : {OriginTie::EitherSide, OriginTie::BuyOnly}) {
            GreedyOptions opts;
            opts.origin_tie = tie;
            if (verify_greedy(tg.pot, tg.x, game.block, game.outcome.ordering, opts)) return false;
        }
        return true;
    }));

    out.push_back(run_trials("sandwich", "additive_no_profit", n, config, [](Rng& rng, std::uint64_t) {
        const PoolState x = random_state(rng, kAdditive);
        const double qty = random_quantity(rng, x, 0.5);
        const Order user = make_buy(qty, uniform(rng, 1.0, 3.0));
        try {
            plan_sandwich(kAdditive, x, user);
            return false;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotLiquidityPreserving) return false;
        }
        const double w = uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : uniform(rng, 0.0, x.x1 - qty);
        const Game game = sandwich_game(kAdditive, x, user, w);
        const UtilityVector miner = agent_utility(game.outcome, game.block, kMiner);
        return std::abs(miner.d1) <= 1e-9 && std::abs(miner.d2) <= 1e-9;
    }));
    return out;
}

}  // namespace gsr
