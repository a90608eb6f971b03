#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edcasim/kernel.hpp"
#include "edcasim/metrics.hpp"
#include "edcasim/scenario.hpp"

namespace edcasim::runner {

struct SweepOptions {
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    unsigned jobs = 0;  // 0 = one worker per available core
    bool paranoid = false;
};

struct SweepFailure {
    std::string scenario_id;
    std::string policy;
    std::uint64_t seed = 0;
    std::string message;
};

// Every completed (scenario, policy, seed) cell, in the deterministic
// scenario-major input order regardless of how workers were scheduled.
struct SweepResult {
    std::vector<metrics::MetricsLedger> ledgers;
    std::vector<SweepFailure> failures;

    bool ok() const { return failures.empty(); }
};

// Runs the full cross product of scenarios x policies x seeds. Cells are
// independent, so they execute in parallel when jobs > 1; one failing cell
// is recorded and the rest continue.
SweepResult run_sweep(const std::vector<ScenarioSpec>& scenarios,
                      const std::vector<kernel::PolicyConfig>& policies,
                      const SweepOptions& options = {});

// Per-(scenario, scope) means over seeds, static and adaptive side by side,
// with the comparison deltas: relative throughput gain and absolute
// retransmission drop of qcaaae over edca. Metrics undefined for a scope
// render as nan.
std::string summary_csv(const std::vector<metrics::MetricsLedger>& ledgers);

}  // namespace edcasim::runner
