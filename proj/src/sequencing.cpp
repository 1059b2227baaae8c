#include "gsr/sequencing.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "gsr/error.hpp"
#include "gsr/exchange.hpp"

namespace gsr {

Block::Block(std::vector<Order> orders)
    : orders_(std::move(orders)), owners_(orders_.size(), AgentId{1}) {}

Block::Block(std::vector<Order> orders, std::vector<AgentId> owners)
    : orders_(std::move(orders)), owners_(std::move(owners)) {
    if (orders_.size() != owners_.size()) {
        throw Error(ErrorCode::InvalidOrder, "every order needs exactly one owner");
    }
}

std::size_t Block::add(const Order& order, AgentId owner) {
    orders_.push_back(order);
    owners_.push_back(owner);
    return orders_.size() - 1;
}

ExecutionOrdering::ExecutionOrdering(std::vector<std::size_t> sequence) : sequence_(std::move(sequence)) {
    std::vector<bool> seen(sequence_.size(), false);
    for (std::size_t index : sequence_) {
        if (index >= sequence_.size() || seen[index]) {
            throw Error(ErrorCode::InvalidPermutation, "ordering is not a permutation of the block");
        }
        seen[index] = true;
    }
}

ExecutionOrdering ExecutionOrdering::identity(std::size_t n) {
    std::vector<std::size_t> seq(n);
    std::iota(seq.begin(), seq.end(), std::size_t{0});
    return ExecutionOrdering(std::move(seq));
}

std::string_view to_string(TieBreak::Kind kind) noexcept {
    switch (kind) {
        case TieBreak::Kind::LowestIndex: return "lowest-index";
        case TieBreak::Kind::HighestQuantity: return "highest-quantity";
        case TieBreak::Kind::SeededRandom: return "random";
    }
    return "unknown";
}

TieBreak::Kind parse_tie_break(std::string_view name) {
    if (name == "lowest-index") return TieBreak::Kind::LowestIndex;
    if (name == "highest-quantity") return TieBreak::Kind::HighestQuantity;
    if (name == "random") return TieBreak::Kind::SeededRandom;
    throw Error(ErrorCode::ParseError, "unknown tie-break '" + std::string(name) + "'");
}

Position classify_position(double x1, double x1_origin, double eps) noexcept {
    if (eps > 0.0) {
        if (x1 > x1_origin + eps) return Position::Above;
        if (x1 < x1_origin - eps) return Position::Below;
        return Position::AtOrigin;
    }
    if (x1 > x1_origin) return Position::Above;
    if (x1 < x1_origin) return Position::Below;
    return Position::AtOrigin;
}

bool greedy_allows(Side side, Position pos, OriginTie origin_tie) noexcept {
    switch (pos) {
        case Position::Above: return side == Side::Buy;
        case Position::Below: return side == Side::Sell;
        case Position::AtOrigin: return side == Side::Buy || origin_tie == OriginTie::EitherSide;
    }
    return false;
}

namespace {

class Picker {
public:
    Picker(const Block& block, const TieBreak& tie) : block_(block), tie_(tie), rng_(tie.seed) {}

    // Removes and returns the chosen index; `pool` is kept in ascending order.
    std::size_t take(std::vector<std::size_t>& pool) {
        std::size_t pos = 0;
        switch (tie_.kind) {
            case TieBreak::Kind::LowestIndex:
                break;
            case TieBreak::Kind::HighestQuantity:
                for (std::size_t i = 1; i < pool.size(); ++i) {
                    if (block_.order(pool[i]).qty > block_.order(pool[pos]).qty) pos = i;
                }
                break;
            case TieBreak::Kind::SeededRandom:
                pos = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng_);
                break;
        }
        const std::size_t chosen = pool[pos];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pos));
        return chosen;
    }

private:
    const Block& block_;
    TieBreak tie_;
    std::mt19937_64 rng_;
};

}  // namespace

GreedyRun greedy_sequence_counted(Potential pot, PoolState x0, const Block& block,
                                  const GreedyOptions& opts) {
    std::vector<std::size_t> buys;
    std::vector<std::size_t> sells;
    for (std::size_t i = 0; i < block.size(); ++i) {
        (block.order(i).is_buy() ? buys : sells).push_back(i);
    }

    Picker picker(block, opts.tie_break);
    std::vector<std::size_t> seq;
    seq.reserve(block.size());
    std::size_t executions = 0;
    PoolState state = x0;
    while (!buys.empty() && !sells.empty()) {
        const Position pos = classify_position(state.x1, x0.x1, opts.origin_eps);
        auto& pool = pos == Position::Below ? sells : buys;
        const std::size_t chosen = picker.take(pool);
        seq.push_back(chosen);
        state = execute_order(pot, state, block.order(chosen)).next;
        ++executions;
    }

    std::vector<std::size_t> rest;
    std::merge(buys.begin(), buys.end(), sells.begin(), sells.end(), std::back_inserter(rest));
    while (!rest.empty()) seq.push_back(picker.take(rest));

    return GreedyRun{ExecutionOrdering(std::move(seq)), executions};
}

ExecutionOrdering greedy_sequence(Potential pot, PoolState x0, const Block& block,
                                  const GreedyOptions& opts) {
    return greedy_sequence_counted(pot, x0, block, opts).ordering;
}

bool verify_greedy(Potential pot, PoolState x0, const Block& block,
                   const ExecutionOrdering& ordering, const GreedyOptions& opts) {
    const std::size_t n = ordering.size();
    if (n != block.size()) {
        throw Error(ErrorCode::InvalidPermutation, "ordering length differs from block size");
    }
    // suffix_buys[t]: buys among positions t..n-1.
    std::vector<std::size_t> suffix_buys(n + 1, 0);
    for (std::size_t t = n; t-- > 0;) {
        suffix_buys[t] = suffix_buys[t + 1] + (block.order(ordering[t]).is_buy() ? 1 : 0);
    }

    PoolState state = x0;
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t remaining = n - t;
        if (suffix_buys[t] == remaining || suffix_buys[t] == 0) return true;
        const Order& order = block.order(ordering[t]);
        const Position pos = classify_position(state.x1, x0.x1, opts.origin_eps);
        if (!greedy_allows(order.side, pos, opts.origin_tie)) return false;
        state = execute_order(pot, state, order).next;
    }
    return true;
}

ExecutionOrdering arbitrary_sequence(const Block& block, std::vector<std::size_t> permutation) {
    if (permutation.size() != block.size()) {
        throw Error(ErrorCode::InvalidPermutation, "permutation length differs from block size");
    }
    return ExecutionOrdering(std::move(permutation));
}

std::vector<ExecutionOrdering> enumerate_greedy_orderings(Potential pot, PoolState x0,
                                                          const Block& block, std::size_t max_orders,
                                                          const GreedyOptions& opts) {
    if (block.size() > max_orders) {
        throw Error(ErrorCode::TooLarge, "block too large for exhaustive enumeration");
    }
    std::vector<std::size_t> perm(block.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<ExecutionOrdering> accepted;
    do {
        ExecutionOrdering candidate(perm);
        if (verify_greedy(pot, x0, block, candidate, opts)) accepted.push_back(std::move(candidate));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return accepted;
}

}  // namespace gsr
