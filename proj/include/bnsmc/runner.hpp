#pragma once

// Orchestrates a full Monte Carlo run: one stream per path (stream id =
// path index), a worker pool over fixed-size chunks of paths, and a
// reduction that merges per-chunk accumulators in chunk order so the output
// is bit-identical for any worker count.

#include <cstdint>
#include <span>
#include <vector>

#include "bnsmc/estimators.hpp"

namespace bnsmc {

struct RunConfig {
    Method method = Method::Algo2;
    std::uint64_t steps = 100;
    std::uint64_t paths = 100000;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = hardware concurrency
};

struct RunRequest {
    Estimand estimand = Estimand::TerminalMean;
    double strike = std::numeric_limits<double>::quiet_NaN();  // options only
};

struct RunDiagnostics {
    std::uint64_t jumps1 = 0;
    std::uint64_t jumps3 = 0;
    std::uint64_t ar_proposals = 0;
    double mean_terminal_weight = 1.0;  // sample mean of Z_T (1 for algo2)
};

struct RunResult {
    std::vector<EstimateReport> reports;  // one per request, same order
    RunDiagnostics diagnostics;
    double wall_time_sec = 0.0;
};

RunResult run_simulation(const Model& model, const RunConfig& config,
                         std::span<const RunRequest> requests);

}  // namespace bnsmc
