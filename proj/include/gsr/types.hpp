#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

namespace gsr {

// Numeric tolerances shared by every module.
struct Tolerances {
    double potential_rel = 1e-9;  // |phi(next) - phi(prev)| <= potential_rel * |phi(prev)|
    double root_abs = 1e-12;      // bisection stops when the bracket is this narrow
    int root_iters = 200;         // ... or after this many halvings
    double cmp = 1e-9;            // slack on non-strict lemma inequalities
};

inline constexpr Tolerances kTol{};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Reserves of token 1 and token 2 held by the pool.
struct PoolState {
    double x1 = 0.0;
    double x2 = 0.0;

    friend bool operator==(const PoolState&, const PoolState&) = default;
};

enum class Side : std::uint8_t { Buy, Sell };

std::string_view to_string(Side side) noexcept;

// Buy(q, p) withdraws q units of token 1 paying at most q*p of token 2.
// Sell(q, p) deposits q units of token 1 receiving at least q*p of token 2.
struct Order {
    Side side = Side::Buy;
    double qty = 0.0;
    double limit = kInf;

    bool is_buy() const noexcept { return side == Side::Buy; }
    bool is_sell() const noexcept { return side == Side::Sell; }
    bool is_market() const noexcept { return is_buy() ? limit == kInf : limit == 0.0; }

    // Maximum payment (buy) or minimum proceeds (sell) in token 2.
    double limit_amount() const noexcept { return qty * limit; }

    friend bool operator==(const Order&, const Order&) = default;
};

// Validating constructors; throw Error(InvalidOrder) unless qty > 0 and limit >= 0.
Order make_buy(double qty, double limit = kInf);
Order make_sell(double qty, double limit = 0.0);

enum class PotentialKind : std::uint8_t { Product, Additive, Stable };

std::string_view to_string(PotentialKind kind) noexcept;
PotentialKind parse_potential_kind(std::string_view name);

struct Potential {
    PotentialKind kind = PotentialKind::Product;

    // Product and Stable make Buy(q) diverge as q approaches the token-1 reserve.
    bool is_liquidity_preserving() const noexcept { return kind != PotentialKind::Additive; }

    friend bool operator==(const Potential&, const Potential&) = default;
};

inline constexpr Potential kProduct{PotentialKind::Product};
inline constexpr Potential kAdditive{PotentialKind::Additive};
inline constexpr Potential kStable{PotentialKind::Stable};

enum class ExecStatus : std::uint8_t { Executed, Aborted };

std::string_view to_string(ExecStatus status) noexcept;

struct ExecResult {
    ExecStatus status = ExecStatus::Aborted;
    double payment = 0.0;  // token-2 amount Y moved by the order; 0 when aborted
    PoolState next;

    bool executed() const noexcept { return status == ExecStatus::Executed; }
};

using AgentId = std::uint32_t;
inline constexpr AgentId kMiner = 0;

}  // namespace gsr
