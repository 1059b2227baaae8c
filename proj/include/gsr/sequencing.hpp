#pragma once

// Sequencing rules: the Greedy Sequencing Rule, its verifier, and an
// unconstrained baseline where the miner picks any permutation.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gsr/types.hpp"

namespace gsr {

// Orders of one block with stable indices 0..n-1 and their owners (agent 0 is the miner).
class Block {
public:
    Block() = default;
    // All orders owned by agent 1 unless owners are given.
    explicit Block(std::vector<Order> orders);
    Block(std::vector<Order> orders, std::vector<AgentId> owners);

    std::size_t size() const noexcept { return orders_.size(); }
    bool empty() const noexcept { return orders_.empty(); }
    const Order& order(std::size_t index) const { return orders_.at(index); }
    AgentId owner(std::size_t index) const { return owners_.at(index); }
    std::span<const Order> orders() const noexcept { return orders_; }
    std::span<const AgentId> owners() const noexcept { return owners_; }

    std::size_t add(const Order& order, AgentId owner);
    void set_owner(std::size_t index, AgentId owner) { owners_.at(index) = owner; }

private:
    std::vector<Order> orders_;
    std::vector<AgentId> owners_;
};

// A permutation of block indices: sequence()[t] executes at step t+1.
class ExecutionOrdering {
public:
    ExecutionOrdering() = default;
    // Throws InvalidPermutation unless `sequence` is a permutation of 0..n-1.
    explicit ExecutionOrdering(std::vector<std::size_t> sequence);

    static ExecutionOrdering identity(std::size_t n);

    std::size_t size() const noexcept { return sequence_.size(); }
    std::size_t operator[](std::size_t t) const { return sequence_.at(t); }
    const std::vector<std::size_t>& sequence() const noexcept { return sequence_; }

    friend bool operator==(const ExecutionOrdering&, const ExecutionOrdering&) = default;
    friend auto operator<=>(const ExecutionOrdering&, const ExecutionOrdering&) = default;

private:
    std::vector<std::size_t> sequence_;
};

// Which order the greedy rule takes from the partition it must draw from.
struct TieBreak {
    enum class Kind : std::uint8_t { LowestIndex, HighestQuantity, SeededRandom };
    Kind kind = Kind::LowestIndex;
    std::uint64_t seed = 0;
};

std::string_view to_string(TieBreak::Kind kind) noexcept;
TieBreak::Kind parse_tie_break(std::string_view name);

// What the rule permits when the token-1 reserve sits exactly at its block-initial value.
enum class OriginTie : std::uint8_t {
    BuyOnly,     // only a buy may follow (the literal ">=" branch)
    EitherSide,  // a buy or a sell may follow
};

struct GreedyOptions {
    TieBreak tie_break{};
    OriginTie origin_tie = OriginTie::EitherSide;
    // Reserves within this distance of the initial token-1 reserve count as a tie. 0 means exact.
    double origin_eps = 0.0;
};

enum class Position : std::uint8_t { Above, AtOrigin, Below };

Position classify_position(double x1, double x1_origin, double eps) noexcept;

// Sides the greedy rule allows next at a state with mixed remaining orders.
bool greedy_allows(Side side, Position pos, OriginTie origin_tie) noexcept;

struct GreedyRun {
    ExecutionOrdering ordering;
    std::size_t executions = 0;  // order executions simulated while choosing sides
};

GreedyRun greedy_sequence_counted(Potential pot, PoolState x0, const Block& block,
                                  const GreedyOptions& opts = {});

// Greedy Sequencing Rule. Ties at the origin always take a buy, which every OriginTie admits.
ExecutionOrdering greedy_sequence(Potential pot, PoolState x0, const Block& block,
                                  const GreedyOptions& opts = {});

// Membership test for the greedy rule's language. Throws InvalidPermutation
// when `ordering` is not a permutation of the block.
bool verify_greedy(Potential pot, PoolState x0, const Block& block,
                   const ExecutionOrdering& ordering, const GreedyOptions& opts = {});

// Status-quo baseline: the miner's permutation, validated.
ExecutionOrdering arbitrary_sequence(const Block& block, std::vector<std::size_t> permutation);

inline constexpr std::size_t kDefaultEnumerationLimit = 8;

// Every permutation the verifier accepts, sorted. Throws TooLarge when the block exceeds max_orders.
std::vector<ExecutionOrdering> enumerate_greedy_orderings(Potential pot, PoolState x0,
                                                          const Block& block,
                                                          std::size_t max_orders = kDefaultEnumerationLimit,
                                                          const GreedyOptions& opts = {});

// Every ordering the greedy algorithm can emit under some sequence of free choices,
// found by branching the algorithm itself rather than by filtering permutations. Sorted.
std::vector<ExecutionOrdering> reachable_greedy_orderings(Potential pot, PoolState x0,
                                                          const Block& block,
                                                          std::size_t max_orders = kDefaultEnumerationLimit,
                                                          const GreedyOptions& opts = {});

}  // namespace gsr
