// Times every suite with the serial reference and with the OpenMP kernels, and checks
// that both produce the same tallies.
//
//   bench_suites [trials] [seed]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "gsr/suites.hpp"

using namespace gsr;

namespace {

template <class F>
double timed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 5000;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
    std::printf("trials %llu, seed %llu, %d OpenMP threads\n", static_cast<unsigned long long>(trials),
                static_cast<unsigned long long>(seed), omp_get_max_threads());
    std::printf("%-14s %10s %10s %8s  %s\n", "suite", "serial s", "parallel s", "speedup", "tallies");
    bool all_equal = true;
    for (std::string_view name : suite_names()) {
        if (name == "all") continue;
        std::vector<InvariantTally> serial;
        std::vector<InvariantTally> parallel;
        const double ts = timed([&] { serial = run_suite(name, {trials, seed, Execution::Serial}); });
        const double tp = timed([&] { parallel = run_suite(name, {trials, seed, Execution::Parallel}); });
        const bool equal = serial == parallel;
        all_equal = all_equal && equal;
        std::printf("%-14s %10.3f %10.3f %8.2f  %s\n", std::string(name).c_str(), ts, tp, tp > 0 ? ts / tp : 0.0,
                    equal ? "equal" : "DIFFER");
    }
    return all_equal ? 0 : 1;
}
