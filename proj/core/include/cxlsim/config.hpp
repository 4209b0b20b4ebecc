// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cxlsim/devices.hpp"
#include "cxlsim/replacement.hpp"
#include "cxlsim/workloads.hpp"

namespace cxlsim {

enum class OutputFormat : std::uint8_t { Json, Csv };

OutputFormat parse_format(const std::string& name);  // throws ConfigError
std::string to_string(OutputFormat format);

// Full run description. Defaults mirror the evaluated configuration:
// 16MB DRAM cache, 16GB SSD, 25ns CXL.mem port latency (50ns total per
// access), 50ns DRAM cache access, PMEM 150/500ns. Everything is
// overridable through the JSON config document or CLI flags.
struct RunConfig {
  DeviceKind device = DeviceKind::CxlSsdCached;
  std::optional<PolicyKind> policy;  // present iff device == CxlSsdCached

  WorkloadKind workload = WorkloadKind::RandLat;
  std::string trace_path;
  std::uint64_t footprint_bytes = 0;  // 0 = workload default
  std::uint64_t op_count = 0;         // 0 = workload default
  std::uint32_t value_size = 216;
  std::uint64_t kv_metadata_bytes = 64 * 1024;
  std::uint64_t seed = 42;

  std::uint64_t cxl_latency_ns = 25;  // per port crossing, 2x per access
  DeviceTiming dram{45, 45};
  DeviceTiming pmem{150, 500};
  std::uint64_t cache_hit_ns = 50;

  std::uint64_t local_memory_bytes = 512ULL * 1024 * 1024;
  std::uint64_t cxl_window_base = 4ULL * 1024 * 1024 * 1024;

  std::uint64_t cache_capacity_bytes = 16ULL * 1024 * 1024;
  std::uint32_t cache_ways = 8;
  std::uint32_t mshr_entries = 32;
  std::uint64_t lfru_aging_period = 1024;

  SsdConfig ssd;

  std::uint32_t max_outstanding = 16;
  std::uint64_t max_events = 1'000'000'000ULL;

  std::string output;  // empty = stdout
  OutputFormat format = OutputFormat::Json;
  std::string sweep;   // "", "device" or "policy"
  std::vector<std::string> sweep_values;

  bool operator==(const RunConfig&) const = default;
};

// Parses a JSON config document. Unknown keys are rejected, omitted keys
// take the defaults above, and the policy default (lru) is filled in for
// the cached device. Errors name the offending key.
RunConfig parse_config(const std::string& json_text);

// Full-document echo of a resolved config; parse_config(emit) round-trips.
std::string config_to_json_text(const RunConfig& config);

// Cross-field validation (also called by parse_config).
void validate(const RunConfig& config);

// Maps the config onto a generator spec (workload defaults resolved,
// traffic targeted at the device window).
WorkloadSpec workload_spec_from(const RunConfig& config);

// Latency composition constants for the devices module.
DeviceLatencyParams latency_params_from(const RunConfig& config);

}  // namespace cxlsim
