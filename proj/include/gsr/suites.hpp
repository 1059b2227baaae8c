#pragma once

// Randomized property suites. Every trial draws from its own seeded stream, so the
// parallel kernels and their serial reference produce identical tallies.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gsr/types.hpp"

namespace gsr {

enum class Execution : std::uint8_t { Serial, Parallel };

struct SuiteConfig {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    Execution execution = Execution::Parallel;
};

struct InvariantTally {
    std::string suite;
    std::string name;
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    std::int64_t first_violation = -1;  // lowest failing trial index, -1 if none

    bool passed() const noexcept { return violations == 0 && trials > 0; }
    friend bool operator==(const InvariantTally&, const InvariantTally&) = default;
};

// Suite names: pricing, duality, greedy, impossibility, sandwich, all.
bool is_suite_name(std::string_view name) noexcept;
std::vector<std::string_view> suite_names();

// Throws Error(ParseError) on an unknown suite.
std::vector<InvariantTally> run_suite(std::string_view name, const SuiteConfig& config);

std::vector<InvariantTally> pricing_suite(const SuiteConfig& config);
std::vector<InvariantTally> duality_suite(const SuiteConfig& config);
std::vector<InvariantTally> greedy_suite(const SuiteConfig& config);
std::vector<InvariantTally> impossibility_suite(const SuiteConfig& config);
std::vector<InvariantTally> sandwich_suite(const SuiteConfig& config);

// Individual invariants, exposed for the acceptance suite.
InvariantTally stable_solver_grid_check(const SuiteConfig& config);
InvariantTally verifier_soundness_check(const SuiteConfig& config, std::size_t max_orders = 7);

// Independent fine-grid root scans of the stable payment and proceeds. The grid spans
// [0, span] in steps of span * 1e-6 and returns the midpoint of the crossing cell.
double grid_scan_payment(Potential pot, PoolState x, double qty, double span);
double grid_scan_proceeds(Potential pot, PoolState x, double qty);

}  // namespace gsr
