// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cxlsim/protocol.hpp"
#include "cxlsim/types.hpp"

namespace cxlsim {

enum class WorkloadKind : std::uint8_t { Stream, RandLat, KeyValue, TraceFile };

WorkloadKind parse_workload(const std::string& name);  // throws ConfigError
std::string to_string(WorkloadKind kind);

// Everything a generator needs; seed fully determines the sequence.
struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::RandLat;
  std::uint64_t footprint_bytes = 0;  // per-array for stream, region for randlat
  std::uint64_t op_count = 0;         // randlat reads
  std::uint32_t value_size = 216;     // key-value record bytes: 216 or 532
  std::uint64_t seed = 42;
  std::uint64_t target_device_base = 0;
  std::uint64_t metadata_bytes = 64 * 1024;  // key-value hot metadata region
  std::string trace_path;

  bool operator==(const WorkloadSpec&) const = default;
};

// One trace element. depends_on_prev gates issue on the previous op's
// completion (the RandLat pointer chase); independent ops may pipeline.
struct TraceOp {
  MemRequest req;
  bool depends_on_prev = false;
};

struct RequestTrace {
  std::vector<TraceOp> ops;
  // Logical operations for throughput reporting (key-value ops); 0 means
  // QPS is not applicable.
  std::uint64_t logical_ops = 0;
  // Highest byte touched relative to target_device_base, for bounds
  // validation against the device window.
  std::uint64_t span_bytes = 0;
};

// The four stream kernels (copy, scale, add, triad) as sequential 64B
// sweeps over three arrays of footprint_bytes each.
RequestTrace gen_stream(const WorkloadSpec& spec);

// Dependent pointer chase: op_count uniform-random 64B reads, each
// issued only after the previous one completes.
RequestTrace gen_randlat(const WorkloadSpec& spec);

// Key-value store traffic shaped like a log-structured store: a hot
// metadata region touched once per operation plus densely packed per-key
// records of ceil(value_size/64) lines. Four phases of 10,000 operations
// each: insert (record+metadata writes), query (reads), update
// (record read+write, metadata write), delete (metadata write only).
RequestTrace gen_kv(const WorkloadSpec& spec);

// Trace file grammar, one request per line, '#' starts a comment:
//   <issue_ns:decimal> <R|W> <addr:0x-hex> <size:decimal>
// Addresses must be 64B-aligned; sizes other than 64 expand into
// ceil(size/64) consecutive 64B sub-requests.
RequestTrace read_trace(const std::string& path);

// Dispatch on spec.kind.
RequestTrace generate(const WorkloadSpec& spec);

inline constexpr std::uint64_t kKvOpsPerPhase = 10'000;
inline constexpr std::uint64_t kKvPhases = 4;

// Deterministic payload for generated writes.
CacheLine payload_for(std::uint32_t id, std::uint64_t addr);

}  // namespace cxlsim
