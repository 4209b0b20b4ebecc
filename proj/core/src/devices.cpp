// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/devices.hpp"

#include <algorithm>
#include <string>

#include "cxlsim/errors.hpp"

namespace cxlsim {

void SsdConfig::validate() const {
  if (page_size != kPageBytes) {
    throw ConfigError("ssd page size must be 4096 bytes");
  }
  if (capacity_bytes == 0 || capacity_bytes % page_size != 0) {
    throw ConfigError("ssd capacity must be a positive multiple of 4096");
  }
  if (page_read_ns == 0 || page_program_ns == 0) {
    throw ConfigError("ssd page latencies must be positive");
  }
  if (queue_width == 0) throw ConfigError("ssd queue width must be >= 1");
}

DeviceKind parse_device(const std::string& name) {
  if (name == "dram") return DeviceKind::Dram;
  if (name == "cxl-dram") return DeviceKind::CxlDram;
  if (name == "pmem") return DeviceKind::Pmem;
  if (name == "cxl-ssd") return DeviceKind::CxlSsd;
  if (name == "cxl-ssd-cached") return DeviceKind::CxlSsdCached;
  throw ConfigError(
      "unknown device '" + name +
      "' (expected dram|cxl-dram|pmem|cxl-ssd|cxl-ssd-cached)");
}

std::string to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::Dram: return "dram";
    case DeviceKind::CxlDram: return "cxl-dram";
    case DeviceKind::Pmem: return "pmem";
    case DeviceKind::CxlSsd: return "cxl-ssd";
    case DeviceKind::CxlSsdCached: return "cxl-ssd-cached";
  }
  return "?";
}

bool is_cxl_device(DeviceKind kind) {
  return kind == DeviceKind::CxlDram || kind == DeviceKind::CxlSsd ||
         kind == DeviceKind::CxlSsdCached;
}

bool is_ssd_device(DeviceKind kind) {
  return kind == DeviceKind::CxlSsd || kind == DeviceKind::CxlSsdCached;
}

std::uint64_t dram_access_ns(const DeviceTiming& timing, AccessKind kind) {
  return kind == AccessKind::Read ? timing.read_ns : timing.write_ns;
}

std::uint64_t pmem_access_ns(const DeviceTiming& timing, AccessKind kind) {
  return kind == AccessKind::Read ? timing.read_ns : timing.write_ns;
}

SsdQueueModel::SsdQueueModel(const SsdConfig& config) : config_(config) {
  config_.validate();
  slot_free_ticks_.assign(config_.queue_width, 0);
}

SimTime SsdQueueModel::page_op(SimTime now, AccessKind kind,
                               std::uint64_t lba) {
  if (lba >= config_.num_lbas()) {
    throw AddressFault("ssd page op beyond capacity: lba " +
                       std::to_string(lba) + " >= " +
                       std::to_string(config_.num_lbas()));
  }
  auto slot = std::min_element(slot_free_ticks_.begin(),
                               slot_free_ticks_.end());
  const std::uint64_t start = std::max(now.ticks, *slot);
  const std::uint64_t latency_ns = kind == AccessKind::Read
                                       ? config_.page_read_ns
                                       : config_.page_program_ns;
  const std::uint64_t done = start + SimTime::from_ns(latency_ns).ticks;
  *slot = done;
  if (kind == AccessKind::Read) {
    ++page_reads_;
  } else {
    ++page_programs_;
  }
  return SimTime{done};
}

SimTime SsdQueueModel::last_completion() const {
  return SimTime{*std::max_element(slot_free_ticks_.begin(),
                                   slot_free_ticks_.end())};
}

std::uint64_t end_to_end_latency_ns(DeviceKind device, AccessKind kind,
                                    const DeviceLatencyParams& params,
                                    std::optional<CacheOutcome> cache_outcome) {
  switch (device) {
    case DeviceKind::Dram:
      return dram_access_ns(params.dram, kind);
    case DeviceKind::Pmem:
      return pmem_access_ns(params.pmem, kind);
    case DeviceKind::CxlDram:
      return params.cxl_total_ns() + dram_access_ns(params.dram, kind);
    case DeviceKind::CxlSsd:
      // Full-page op with the 64B extracted afterwards.
      return params.cxl_total_ns() + (kind == AccessKind::Read
                                          ? params.ssd_page_read_ns
                                          : params.ssd_page_program_ns);
    case DeviceKind::CxlSsdCached: {
      if (!cache_outcome) {
        throw SimLogicError(
            "end_to_end_latency: cached device needs a cache outcome");
      }
      std::uint64_t total = params.cxl_total_ns() + params.cache_hit_ns;
      if (!cache_outcome->hit) total += cache_outcome->fill_ns;
      return total;
    }
  }
  throw SimLogicError("unknown device kind");
}

}  // namespace cxlsim
