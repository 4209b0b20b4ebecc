// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cxlsim/time.hpp"
#include "cxlsim/types.hpp"

namespace cxlsim {

// Latency distribution over the recorded request samples, in ticks.
// Percentiles use the nearest-rank definition: the ceil(p/100 * N)-th
// smallest sample, 1-indexed.
struct LatencySummary {
  std::uint64_t count = 0;
  std::uint64_t min_ticks = 0;
  std::uint64_t p50_ticks = 0;
  std::uint64_t p95_ticks = 0;
  std::uint64_t p99_ticks = 0;
  std::uint64_t max_ticks = 0;
  std::uint64_t total_ticks = 0;

  double mean_ns() const {
    if (count == 0) return 0.0;
    return static_cast<double>(total_ticks) /
           static_cast<double>(count) / SimTime::kTicksPerNs;
  }
};

// Per-run aggregate. Fields that do not apply to a given device or
// workload stay at their *_present=false / zero defaults and are emitted
// as explicit "na" markers by the report layer, never as NaN.
struct StatsReport {
  std::uint64_t requests = 0;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t dropped = 0;

  LatencySummary latency;

  std::uint64_t request_read_bytes = 0;
  std::uint64_t request_write_bytes = 0;
  std::uint64_t backend_read_bytes = 0;
  std::uint64_t backend_write_bytes = 0;

  bool cache_present = false;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;

  bool ssd_present = false;
  std::uint64_t ssd_page_reads = 0;
  std::uint64_t ssd_page_programs = 0;
  std::uint64_t dirty_writebacks = 0;
  std::uint64_t flush_writebacks = 0;

  bool cxl_link = false;
  std::uint64_t meta_any = 0;
  std::uint64_t meta_invalid = 0;
  std::uint64_t meta_shared = 0;

  std::uint64_t kv_ops = 0;  // 0 => QPS not applicable
  SimTime simulated_end{};
  std::uint64_t events_dispatched = 0;

  std::optional<double> hit_rate() const;
  std::optional<double> bandwidth_mbps() const;  // request bytes / sim time
  std::optional<double> qps() const;
  std::optional<double> read_amplification() const;
  std::optional<double> write_amplification() const;
};

// Accumulates samples and counters during a run; summarize() freezes the
// aggregate view. Latency samples are kept only for Cache-level (64B
// request) records; Backend records count page operations and bytes.
class StatsAccumulator {
 public:
  void record_access(SimTime latency, std::uint64_t bytes, AccessKind kind,
                     AccessLevel level);
  void record_dropped() { ++dropped_; }
  void record_cache_hit() { ++cache_hits_; }
  void record_cache_miss() { ++cache_misses_; }
  void record_dirty_writeback() { ++dirty_writebacks_; }
  void record_flush_writeback() { ++flush_writebacks_; }

  std::span<const std::uint64_t> latency_samples_ticks() const {
    return samples_;
  }
  std::vector<std::uint64_t> take_samples() { return std::move(samples_); }
  std::uint64_t cache_hits() const { return cache_hits_; }
  std::uint64_t cache_misses() const { return cache_misses_; }
  std::uint64_t ssd_page_reads() const { return ssd_page_reads_; }
  std::uint64_t ssd_page_programs() const { return ssd_page_programs_; }

  StatsReport summarize(SimTime simulated_end) const;

 private:
  std::vector<std::uint64_t> samples_;
  std::uint64_t reads_ = 0, writes_ = 0, dropped_ = 0;
  std::uint64_t request_read_bytes_ = 0, request_write_bytes_ = 0;
  std::uint64_t backend_read_bytes_ = 0, backend_write_bytes_ = 0;
  std::uint64_t ssd_page_reads_ = 0, ssd_page_programs_ = 0;
  std::uint64_t cache_hits_ = 0, cache_misses_ = 0;
  std::uint64_t dirty_writebacks_ = 0, flush_writebacks_ = 0;
};

}  // namespace cxlsim
