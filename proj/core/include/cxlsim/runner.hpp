// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cxlsim/config.hpp"
#include "cxlsim/stats.hpp"
#include "cxlsim/workloads.hpp"

namespace cxlsim {

// Outcome of one simulation run.
struct RunResult {
  RunConfig config;  // resolved echo
  StatsReport stats;
  // Per-request latency samples in dispatch-completion order, exposed so
  // tests can assert exact compositions without float round-off.
  std::vector<std::uint64_t> latency_samples_ticks;
  std::uint32_t max_outstanding_observed = 0;
};

// Test hook: observes the 64B data returned by each completed read on
// the SSD-backed devices.
using ReadDataCallback =
    std::function<void(std::uint32_t req_id, const CacheLine& data)>;

// Builds engine + device + workload from the config, replays the trace
// to completion (including the end-of-run dirty-page flush), and returns
// the report. Deterministic for a fixed config.
RunResult run(const RunConfig& config);

// Same, replaying a caller-supplied trace (shared across sweep runs).
RunResult run_trace(const RunConfig& config, const RequestTrace& trace,
                    const ReadDataCallback& on_read = nullptr);

// One run per axis value over a shared trace. Stops at the first failing
// run, preserving the completed results.
struct SweepOutcome {
  std::vector<std::string> values;
  std::vector<RunResult> results;        // completed runs, in value order
  std::optional<std::string> error;      // set if a run failed
  std::optional<std::string> failed_value;
};

SweepOutcome run_sweep(const RunConfig& base);

// Axis values used when the config does not list any explicitly.
std::vector<std::string> default_sweep_values(const std::string& axis);

}  // namespace cxlsim
