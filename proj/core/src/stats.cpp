// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/stats.hpp"

#include <algorithm>
#include <cmath>

namespace cxlsim {

std::optional<double> StatsReport::hit_rate() const {
  if (!cache_present) return std::nullopt;
  const std::uint64_t total = cache_hits + cache_misses;
  if (total == 0) return std::nullopt;
  return static_cast<double>(cache_hits) / static_cast<double>(total);
}

std::optional<double> StatsReport::bandwidth_mbps() const {
  if (simulated_end.ticks == 0) return std::nullopt;
  const double bytes =
      static_cast<double>(request_read_bytes + request_write_bytes);
  return bytes / simulated_end.seconds() / 1e6;
}

std::optional<double> StatsReport::qps() const {
  if (kv_ops == 0 || simulated_end.ticks == 0) return std::nullopt;
  return static_cast<double>(kv_ops) / simulated_end.seconds();
}

std::optional<double> StatsReport::read_amplification() const {
  if (!ssd_present || request_read_bytes == 0) return std::nullopt;
  return static_cast<double>(backend_read_bytes) /
         static_cast<double>(request_read_bytes);
}

std::optional<double> StatsReport::write_amplification() const {
  if (!ssd_present || request_write_bytes == 0) return std::nullopt;
  return static_cast<double>(backend_write_bytes) /
         static_cast<double>(request_write_bytes);
}

void StatsAccumulator::record_access(SimTime latency, std::uint64_t bytes,
                                     AccessKind kind, AccessLevel level) {
  if (level == AccessLevel::Cache) {
    samples_.push_back(latency.ticks);
    if (kind == AccessKind::Read) {
      ++reads_;
      request_read_bytes_ += bytes;
    } else {
      ++writes_;
      request_write_bytes_ += bytes;
    }
  } else {
    if (kind == AccessKind::Read) {
      ++ssd_page_reads_;
      backend_read_bytes_ += bytes;
    } else {
      ++ssd_page_programs_;
      backend_write_bytes_ += bytes;
    }
  }
}

namespace {

std::uint64_t nearest_rank(const std::vector<std::uint64_t>& sorted,
                           unsigned percentile) {
  // rank = ceil(p/100 * N), 1-indexed
  const std::uint64_t n = sorted.size();
  std::uint64_t rank = (percentile * n + 99) / 100;
  if (rank == 0) rank = 1;
  return sorted[rank - 1];
}

}  // namespace

StatsReport StatsAccumulator::summarize(SimTime simulated_end) const {
  StatsReport report;
  report.requests = reads_ + writes_;
  report.reads = reads_;
  report.writes = writes_;
  report.dropped = dropped_;
  report.request_read_bytes = request_read_bytes_;
  report.request_write_bytes = request_write_bytes_;
  report.backend_read_bytes = backend_read_bytes_;
  report.backend_write_bytes = backend_write_bytes_;
  report.ssd_page_reads = ssd_page_reads_;
  report.ssd_page_programs = ssd_page_programs_;
  report.dirty_writebacks = dirty_writebacks_;
  report.flush_writebacks = flush_writebacks_;
  report.cache_hits = cache_hits_;
  report.cache_misses = cache_misses_;
  report.simulated_end = simulated_end;

  if (!samples_.empty()) {
    std::vector<std::uint64_t> sorted = samples_;
    std::sort(sorted.begin(), sorted.end());
    LatencySummary& lat = report.latency;
    lat.count = sorted.size();
    lat.min_ticks = sorted.front();
    lat.max_ticks = sorted.back();
    lat.p50_ticks = nearest_rank(sorted, 50);
    lat.p95_ticks = nearest_rank(sorted, 95);
    lat.p99_ticks = nearest_rank(sorted, 99);
    lat.total_ticks = 0;
    for (std::uint64_t s : sorted) lat.total_ticks += s;
  }
  return report;
}

}  // namespace cxlsim
