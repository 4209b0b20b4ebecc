// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cxlsim/time.hpp"
#include "cxlsim/types.hpp"

namespace cxlsim {

// Fixed read/write latency pair for DRAM-like and PMEM-like backends.
struct DeviceTiming {
  std::uint64_t read_ns = 0;
  std::uint64_t write_ns = 0;

  bool operator==(const DeviceTiming&) const = default;
};

// Parameterized flash timing model. The paper-scale device is 16GB with
// page operations in the microsecond range; ops beyond queue_width
// serialize on the busiest-free slot.
struct SsdConfig {
  std::uint64_t capacity_bytes = 16ULL * 1024 * 1024 * 1024;
  std::uint32_t page_size = kPageBytes;
  std::uint64_t page_read_ns = 25'000;
  std::uint64_t page_program_ns = 300'000;
  std::uint32_t queue_width = 1;

  std::uint64_t num_lbas() const { return capacity_bytes / page_size; }
  void validate() const;  // throws ConfigError

  bool operator==(const SsdConfig&) const = default;
};

// The five evaluated device configurations.
enum class DeviceKind : std::uint8_t {
  Dram,
  CxlDram,
  Pmem,
  CxlSsd,
  CxlSsdCached,
};

inline constexpr DeviceKind kAllDeviceKinds[] = {
    DeviceKind::Dram, DeviceKind::CxlDram, DeviceKind::Pmem,
    DeviceKind::CxlSsd, DeviceKind::CxlSsdCached};

DeviceKind parse_device(const std::string& name);  // throws ConfigError
std::string to_string(DeviceKind kind);
bool is_cxl_device(DeviceKind kind);
bool is_ssd_device(DeviceKind kind);

std::uint64_t dram_access_ns(const DeviceTiming& timing, AccessKind kind);
std::uint64_t pmem_access_ns(const DeviceTiming& timing, AccessKind kind);

// Serializing page-op queue: each op occupies one of queue_width slots,
// completion = max(now, earliest slot free) + latency. Completions under
// queue_width 1 are therefore non-overlapping and gapless under
// saturation.
class SsdQueueModel {
 public:
  explicit SsdQueueModel(const SsdConfig& config);

  // Returns the absolute completion time. lba is device-relative and
  // bounds-checked against the configured capacity.
  SimTime page_op(SimTime now, AccessKind kind, std::uint64_t lba);

  SimTime last_completion() const;
  std::uint64_t page_reads() const { return page_reads_; }
  std::uint64_t page_programs() const { return page_programs_; }
  const SsdConfig& config() const { return config_; }

 private:
  SsdConfig config_;
  std::vector<std::uint64_t> slot_free_ticks_;
  std::uint64_t page_reads_ = 0;
  std::uint64_t page_programs_ = 0;
};

// Latency composition constants shared by the pure helper and the event
// machine. cxl_port_ns is charged once outbound at the Home Agent and
// once at the device-side decode, i.e. 2x per completed access.
struct DeviceLatencyParams {
  DeviceTiming dram{45, 45};
  DeviceTiming pmem{150, 500};
  std::uint64_t cxl_port_ns = 25;
  std::uint64_t cache_hit_ns = 50;
  std::uint64_t ssd_page_read_ns = 25'000;
  std::uint64_t ssd_page_program_ns = 300'000;

  std::uint64_t cxl_total_ns() const { return 2 * cxl_port_ns; }
};

// Cache outcome feeding the cached-device composition: a hit costs the
// DRAM cache access; a miss adds the SSD fill duration (queue wait
// included) on top of it.
struct CacheOutcome {
  bool hit = true;
  std::uint64_t fill_ns = 0;
};

// End-to-end latency of one 64B access per device kind, in nanoseconds.
// cache_outcome is meaningful only for CxlSsdCached.
std::uint64_t end_to_end_latency_ns(
    DeviceKind device, AccessKind kind, const DeviceLatencyParams& params,
    std::optional<CacheOutcome> cache_outcome = std::nullopt);

}  // namespace cxlsim
