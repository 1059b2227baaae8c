#include "gsr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"

namespace gsr {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(MinerStrategy s) noexcept {
    switch (s) {
        case MinerStrategy::None: return "none";
        case MinerStrategy::Sandwich: return "sandwich";
        case MinerStrategy::Impossibility: return "impossibility";
        case MinerStrategy::CustomOrders: return "custom-orders";
    }
    return "unknown";
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

MinerStrategy parse_strategy(const std::string& name) {
    if (name == "none") return MinerStrategy::None;
    if (name == "sandwich") return MinerStrategy::Sandwich;
    if (name == "impossibility") return MinerStrategy::Impossibility;
    if (name == "custom-orders") return MinerStrategy::CustomOrders;
    parse_fail("unknown miner strategy '" + name + "'");
}

OriginTie parse_origin_tie(const std::string& name) {
    if (name == "either") return OriginTie::EitherSide;
    if (name == "buy-only") return OriginTie::BuyOnly;
    parse_fail("unknown origin_tie '" + name + "'");
}

std::string_view origin_tie_name(OriginTie t) { return t == OriginTie::EitherSide ? "either" : "buy-only"; }

Order order_from_json(const json& j) {
    const std::string side = j.at("side").get<std::string>();
    const double qty = j.at("qty").get<double>();
    const bool market = !j.contains("limit") || j.at("limit").is_null();
    try {
        if (side == "buy") return market ? make_buy(qty) : make_buy(qty, j.at("limit").get<double>());
        if (side == "sell") return market ? make_sell(qty) : make_sell(qty, j.at("limit").get<double>());
    } catch (const Error& e) {
        parse_fail(e.what());
    }
    parse_fail("order side must be 'buy' or 'sell'");
}

ordered_json limit_to_json(const Order& o) {
    if (o.is_market()) return nullptr;
    return o.limit;
}

ordered_json order_to_json(const Order& o) {
    ordered_json j;
    j["side"] = to_string(o.side);
    j["qty"] = o.qty;
    j["limit"] = limit_to_json(o);
    return j;
}

ordered_json state_to_json(PoolState x) { return ordered_json{{"x1", x.x1}, {"x2", x.x2}}; }

PoolState state_from_json(const json& j) {
    const PoolState x{j.at("x1").get<double>(), j.at("x2").get<double>()};
    if (!(x.x1 >= 0.0) || !(x.x2 >= 0.0) || !std::isfinite(x.x1) || !std::isfinite(x.x2)) {
        parse_fail("reserves must be finite and nonnegative");
    }
    return x;
}

template <typename F>
auto guarded(F f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

}  // namespace

Scenario scenario_from_json(const json& j) {
    return guarded([&] {
        Scenario s;
        s.potential = Potential{parse_potential_kind(j.at("potential").get<std::string>())};
        s.initial = state_from_json(j.at("initial_state"));
        if (j.contains("orders")) {
            for (const json& o : j.at("orders")) {
                ScenarioOrder so{order_from_json(o), o.value("owner", AgentId{1})};
                if (so.owner == kMiner) parse_fail("user orders cannot be owned by agent 0");
                s.orders.push_back(so);
            }
        }
        if (j.contains("miner")) {
            const json& m = j.at("miner");
            s.miner.strategy = parse_strategy(m.value("strategy", std::string("none")));
            if (m.contains("target") && !m.at("target").is_null()) s.miner.target = m.at("target").get<std::size_t>();
            s.miner.n = m.value("n", 3);
            if (m.contains("orders")) {
                for (const json& o : m.at("orders")) s.miner.orders.push_back(order_from_json(o));
            }
        }
        s.rule = parse_rule(j.value("rule", std::string("greedy")));
        if (j.contains("ordering") && !j.at("ordering").is_null()) {
            s.ordering = j.at("ordering").get<std::vector<std::size_t>>();
        }
        s.tie_break = parse_tie_break(j.value("tie_break", std::string("lowest-index")));
        s.origin_tie = parse_origin_tie(j.value("origin_tie", std::string("either")));
        s.seed = j.value("seed", std::uint64_t{0});
        return s;
    });
}

ordered_json scenario_to_json(const Scenario& s) {
    ordered_json j;
    j["potential"] = to_string(s.potential.kind);
    j["initial_state"] = state_to_json(s.initial);
    j["orders"] = ordered_json::array();
    for (const ScenarioOrder& o : s.orders) {
        ordered_json oj = order_to_json(o.order);
        oj["owner"] = o.owner;
        j["orders"].push_back(oj);
    }
    ordered_json m;
    m["strategy"] = to_string(s.miner.strategy);
    m["target"] = s.miner.target ? ordered_json(*s.miner.target) : ordered_json(nullptr);
    m["n"] = s.miner.n;
    m["orders"] = ordered_json::array();
    for (const Order& o : s.miner.orders) m["orders"].push_back(order_to_json(o));
    j["miner"] = m;
    j["rule"] = to_string(s.rule);
    j["ordering"] = s.ordering ? ordered_json(*s.ordering) : ordered_json(nullptr);
    j["tie_break"] = to_string(s.tie_break);
    j["origin_tie"] = origin_tie_name(s.origin_tie);
    j["seed"] = s.seed;
    return j;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot open scenario file '" + path + "'");
    return guarded([&] { return scenario_from_json(json::parse(in)); });
}

namespace {

ExecutionOrdering choose_ordering(const Scenario& s, Potential pot, PoolState x0, const Block& block,
                                  std::vector<std::size_t> fallback) {
    if (s.rule == RuleKind::Greedy) return greedy_sequence(pot, x0, block, s.greedy_options());
    if (s.ordering) return arbitrary_sequence(block, *s.ordering);
    return arbitrary_sequence(block, std::move(fallback));
}

std::vector<std::size_t> iota_vec(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

ScenarioRun run_scenario(const Scenario& s) {
    ScenarioRun run;
    run.scenario = s;
    run.pot = s.potential;
    run.x0 = s.initial;
    for (const ScenarioOrder& o : s.orders) run.block.add(o.order, o.owner);

    switch (s.miner.strategy) {
        case MinerStrategy::None: {
            run.outcome = execute_ordering(run.pot, run.x0, run.block,
                                           choose_ordering(s, run.pot, run.x0, run.block, iota_vec(run.block.size())));
            break;
        }
        case MinerStrategy::CustomOrders: {
            for (const Order& o : s.miner.orders) run.block.add(o, kMiner);
            run.outcome = execute_ordering(run.pot, run.x0, run.block,
                                           choose_ordering(s, run.pot, run.x0, run.block, iota_vec(run.block.size())));
            break;
        }
        case MinerStrategy::Sandwich: {
            std::size_t target = s.orders.size();
            if (s.miner.target) {
                target = *s.miner.target;
            } else {
                for (std::size_t i = 0; i < s.orders.size(); ++i) {
                    if (s.orders[i].order.is_buy()) {
                        target = i;
                        break;
                    }
                }
            }
            if (target >= s.orders.size()) parse_fail("sandwich needs a target buy order");
            std::optional<SandwichPlan> plan;
            try {
                plan = plan_sandwich(run.pot, run.x0, s.orders[target].order);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotLiquidityPreserving && e.code() != ErrorCode::UserOrderInfeasible) throw;
                run.strategy_skipped = std::string(to_string(e.code()));
            }
            run.sandwich = plan;
            std::vector<std::size_t> fallback;
            if (plan && plan->has_miner_orders()) {
                const std::size_t front = run.block.add(plan->front(), kMiner);
                const std::size_t back = run.block.add(plan->back(), kMiner);
                fallback = {front, target, back};
            } else {
                fallback = {target};
            }
            for (std::size_t i = 0; i < s.orders.size(); ++i) {
                if (i != target) fallback.push_back(i);
            }
            run.outcome = execute_ordering(run.pot, run.x0, run.block,
                                           choose_ordering(s, run.pot, run.x0, run.block, std::move(fallback)));
            break;
        }
        case MinerStrategy::Impossibility: {
            if (!s.orders.empty()) parse_fail("impossibility scenarios build their own block");
            if (s.potential.kind != PotentialKind::Product) parse_fail("impossibility scenarios use the product potential");
            ImpossibilityInstance inst = impossibility_block(s.miner.n);
            run.x0 = inst.x0;
            const ExecutionOrdering ordering =
                choose_ordering(s, run.pot, run.x0, inst.block, iota_vec(inst.block.size()));
            const ExploitSelection sel = select_exploit(run.pot, run.x0, inst.block, ordering);
            run.block = assign_exploit_ownership(inst.block, sel);
            run.exploit = sel;
            run.outcome = execute_ordering(run.pot, run.x0, run.block, ordering);
            break;
        }
    }
    return run;
}

namespace {

std::vector<AgentId> all_agents(const Block& block) {
    std::set<AgentId> agents(block.owners().begin(), block.owners().end());
    agents.insert(kMiner);
    return {agents.begin(), agents.end()};
}

}  // namespace

ordered_json make_report(const ScenarioRun& run) {
    ordered_json r;
    r["potential"] = to_string(run.pot.kind);
    r["initial_state"] = state_to_json(run.x0);
    r["rule"] = to_string(run.scenario.rule);
    r["ordering"] = run.outcome.ordering.sequence();

    ordered_json trace = ordered_json::array();
    std::uint64_t executed = 0;
    std::uint64_t conservation_violations = 0;
    for (std::size_t t = 0; t < run.outcome.size(); ++t) {
        const std::size_t index = run.outcome.ordering[t];
        const Order& o = run.block.order(index);
        const ExecResult& res = run.outcome.results[t];
        ordered_json step = order_to_json(o);
        step["t"] = t + 1;
        step["index"] = index;
        step["owner"] = run.block.owner(index);
        step["status"] = to_string(res.status);
        step["payment"] = res.payment;
        step["x1"] = res.next.x1;
        step["x2"] = res.next.x2;
        trace.push_back(step);
        if (res.executed()) {
            ++executed;
            if (!potential_preserved(run.pot, run.outcome.state_before(t), res.next)) ++conservation_violations;
        }
    }
    r["trace"] = trace;
    r["final_state"] = state_to_json(run.outcome.final_state());

    ordered_json utilities = ordered_json::array();
    for (AgentId a : all_agents(run.block)) {
        const UtilityVector u = agent_utility(run.outcome, run.block, a);
        utilities.push_back(ordered_json{{"agent", a}, {"d1", u.d1}, {"d2", u.d2},
                                         {"risk_free", is_risk_free(u)},
                                         {"profitable", is_profitable_risk_free(u)}});
    }
    r["utilities"] = utilities;

    const CoreTail split = core_tail_decompose(run.pot, run.block, run.outcome);
    r["core"] = split.core;
    r["tail"] = split.tail;
    r["tail_same_side"] = split.tail_single_side(run.block);

    GreedyOptions opts = run.scenario.greedy_options();
    const bool accepted = verify_greedy(run.pot, run.x0, run.block, run.outcome.ordering, opts);
    r["verifier_accepts"] = accepted;

    ordered_json classes = ordered_json::array();
    std::uint64_t classified = 0;
    std::uint64_t class_violations = 0;
    if (accepted) {
        for (AgentId a : all_agents(run.block)) {
            if (a == kMiner) continue;
            const auto owners = run.block.owners();
            if (std::count(owners.begin(), owners.end(), a) != 1) continue;
            const std::size_t index =
                static_cast<std::size_t>(std::find(owners.begin(), owners.end(), a) - owners.begin());
            std::string label;
            ++classified;
            try {
                label = std::string(to_string(classify_theorem_greedy(run.pot, run.block, run.outcome, a)));
            } catch (const Error&) {
                label = "violation";
                ++class_violations;
            }
            classes.push_back(ordered_json{{"agent", a}, {"index", index}, {"case", label}});
        }
    }
    r["theorem_greedy"] = classes;

    if (run.sandwich) {
        const SandwichPlan& p = *run.sandwich;
        r["sandwich"] = ordered_json{{"w", p.w},
                                     {"miner_qty", p.miner_qty},
                                     {"user_payment", p.user_payment},
                                     {"predicted_profit", p.predicted_profit}};
    }
    if (run.strategy_skipped) r["strategy_skipped"] = *run.strategy_skipped;
    if (run.exploit) {
        const ExploitSelection& e = *run.exploit;
        r["exploit"] = ordered_json{{"buy_index", e.buy_index},
                                    {"sell_indices", {e.sell_indices[0], e.sell_indices[1]}},
                                    {"k", e.k},
                                    {"z_trace", e.z_trace}};
    }

    ordered_json checks = ordered_json::array();
    checks.push_back(ordered_json{{"name", "potential_conservation"}, {"trials", executed},
                                  {"violations", conservation_violations}});
    checks.push_back(ordered_json{{"name", "tail_same_side"}, {"trials", accepted ? 1 : 0},
                                  {"violations", accepted && !split.tail_single_side(run.block) ? 1 : 0}});
    checks.push_back(ordered_json{{"name", "theorem_greedy"}, {"trials", classified},
                                  {"violations", class_violations}});
    r["checks"] = checks;
    return r;
}

void write_trace_csv(std::ostream& os, const ScenarioRun& run) {
    os << "t,side,qty,limit,owner,status,payment,x1,x2\n";
    for (std::size_t t = 0; t < run.outcome.size(); ++t) {
        const std::size_t index = run.outcome.ordering[t];
        const Order& o = run.block.order(index);
        const ExecResult& res = run.outcome.results[t];
        os << (t + 1) << ',' << to_string(o.side) << ',' << format_number(o.qty) << ','
           << format_number(o.limit) << ',' << run.block.owner(index) << ',' << to_string(res.status) << ','
           << format_number(res.payment) << ',' << format_number(res.next.x1) << ','
           << format_number(res.next.x2) << '\n';
    }
}

void write_series_csv(std::ostream& os, const ScenarioRun& run) {
    os << "t,x1,x2,spot_price\n";
    for (std::size_t t = 0; t <= run.outcome.size(); ++t) {
        const PoolState s = run.outcome.state_before(t);
        os << t << ',' << format_number(s.x1) << ',' << format_number(s.x2) << ','
           << format_number(s.x1 > 0.0 ? s.x2 / s.x1 : kInf) << '\n';
    }
}

TraceFile trace_from_json(const json& j) {
    return guarded([&] {
        TraceFile tf;
        tf.pot = Potential{parse_potential_kind(j.at("potential").get<std::string>())};
        tf.x0 = state_from_json(j.at("initial_state"));
        const json& list = j.contains("trace") ? j.at("trace") : j.at("orders");
        if (!list.is_array()) parse_fail("orders must be an array");
        for (const json& o : list) tf.orders.push_back(order_from_json(o));
        return tf;
    });
}

bool verify_trace(const TraceFile& trace, OriginTie origin_tie) {
    Block block{std::vector<Order>(trace.orders)};
    GreedyOptions opts;
    opts.origin_tie = origin_tie;
    return verify_greedy(trace.pot, trace.x0, block, ExecutionOrdering::identity(block.size()), opts);
}

}  // namespace gsr
