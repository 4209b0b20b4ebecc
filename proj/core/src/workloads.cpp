// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/workloads.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cxlsim/errors.hpp"
#include "cxlsim/rng.hpp"

namespace cxlsim {

WorkloadKind parse_workload(const std::string& name) {
  if (name == "stream") return WorkloadKind::Stream;
  if (name == "randlat") return WorkloadKind::RandLat;
  if (name == "kv") return WorkloadKind::KeyValue;
  if (name == "tracefile") return WorkloadKind::TraceFile;
  throw ConfigError("unknown workload '" + name +
                    "' (expected stream|randlat|kv|tracefile)");
}

std::string to_string(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::Stream: return "stream";
    case WorkloadKind::RandLat: return "randlat";
    case WorkloadKind::KeyValue: return "kv";
    case WorkloadKind::TraceFile: return "tracefile";
  }
  return "?";
}

CacheLine payload_for(std::uint32_t id, std::uint64_t addr) {
  // One splitmix64 step over (id, addr), repeated across the line.
  std::uint64_t x = addr ^ (std::uint64_t{id} << 32) ^ 0xA0761D6478BD642FULL;
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  CacheLine line;
  for (std::size_t i = 0; i < line.size(); ++i) {
    line[i] = static_cast<std::uint8_t>(z >> (8 * (i % 8)));
  }
  return line;
}

namespace {

class TraceBuilder {
 public:
  void read(std::uint64_t addr) { push(addr, RequestKind::Read, false); }
  void write(std::uint64_t addr) { push(addr, RequestKind::Write, false); }
  void dependent_read(std::uint64_t addr) {
    push(addr, RequestKind::Read, true);
  }

  RequestTrace finish(std::uint64_t base, std::uint64_t logical_ops) {
    trace_.logical_ops = logical_ops;
    std::uint64_t high = 0;
    for (const TraceOp& op : trace_.ops) {
      high = std::max(high, op.req.addr + op.req.size - base);
    }
    trace_.span_bytes = high;
    return std::move(trace_);
  }

 private:
  void push(std::uint64_t addr, RequestKind kind, bool dependent) {
    MemRequest req;
    req.id = static_cast<std::uint32_t>(trace_.ops.size());
    req.addr = addr;
    req.kind = kind;
    if (kind == RequestKind::Write) req.payload = payload_for(req.id, addr);
    trace_.ops.push_back(TraceOp{req, dependent});
  }

  RequestTrace trace_;
};

}  // namespace

RequestTrace gen_stream(const WorkloadSpec& spec) {
  const std::uint64_t fp =
      spec.footprint_bytes == 0 ? 8ULL * 1024 * 1024 : spec.footprint_bytes;
  if (fp < kCacheLineBytes || fp % kCacheLineBytes != 0) {
    throw ConfigError(
        "stream footprint must be a positive multiple of 64 bytes");
  }
  const std::uint64_t n = fp / kCacheLineBytes;  // elements per array
  const std::uint64_t a = spec.target_device_base;
  const std::uint64_t b = a + fp;
  const std::uint64_t c = b + fp;

  TraceBuilder builder;
  // copy: c[i] = a[i]
  for (std::uint64_t i = 0; i < n; ++i) {
    builder.read(a + i * kCacheLineBytes);
    builder.write(c + i * kCacheLineBytes);
  }
  // scale: b[i] = s * c[i]
  for (std::uint64_t i = 0; i < n; ++i) {
    builder.read(c + i * kCacheLineBytes);
    builder.write(b + i * kCacheLineBytes);
  }
  // add: c[i] = a[i] + b[i]
  for (std::uint64_t i = 0; i < n; ++i) {
    builder.read(a + i * kCacheLineBytes);
    builder.read(b + i * kCacheLineBytes);
    builder.write(c + i * kCacheLineBytes);
  }
  // triad: a[i] = b[i] + s * c[i]
  for (std::uint64_t i = 0; i < n; ++i) {
    builder.read(b + i * kCacheLineBytes);
    builder.read(c + i * kCacheLineBytes);
    builder.write(a + i * kCacheLineBytes);
  }
  return builder.finish(spec.target_device_base, 0);
}

RequestTrace gen_randlat(const WorkloadSpec& spec) {
  const std::uint64_t fp =
      spec.footprint_bytes == 0 ? 64ULL * 1024 * 1024 : spec.footprint_bytes;
  const std::uint64_t ops = spec.op_count == 0 ? 100'000 : spec.op_count;
  if (fp < kCacheLineBytes) {
    throw ConfigError("randlat footprint must be at least one cache line");
  }
  const std::uint64_t lines = fp / kCacheLineBytes;
  Xoshiro256ss rng(spec.seed);
  TraceBuilder builder;
  for (std::uint64_t i = 0; i < ops; ++i) {
    const std::uint64_t addr =
        spec.target_device_base + rng.next_below(lines) * kCacheLineBytes;
    if (i == 0) {
      builder.read(addr);
    } else {
      builder.dependent_read(addr);
    }
  }
  return builder.finish(spec.target_device_base, 0);
}

RequestTrace gen_kv(const WorkloadSpec& spec) {
  if (spec.value_size != 216 && spec.value_size != 532) {
    throw ConfigError("kv value_size must be 216 or 532 bytes");
  }
  if (spec.metadata_bytes < kCacheLineBytes ||
      spec.metadata_bytes % kCacheLineBytes != 0) {
    throw ConfigError("kv metadata region must be a multiple of 64 bytes");
  }
  const std::uint64_t lines = (spec.value_size + kCacheLineBytes - 1) /
                              kCacheLineBytes;
  const std::uint64_t stride = lines * kCacheLineBytes;
  const std::uint64_t meta_lines = spec.metadata_bytes / kCacheLineBytes;
  const std::uint64_t meta_base = spec.target_device_base;
  const std::uint64_t records_base = meta_base + spec.metadata_bytes;

  Xoshiro256ss rng(spec.seed);
  TraceBuilder builder;

  auto meta_addr = [&] {
    return meta_base + rng.next_below(meta_lines) * kCacheLineBytes;
  };
  auto record_addr = [&](std::uint64_t key, std::uint64_t line) {
    return records_base + key * stride + line * kCacheLineBytes;
  };

  // insert: write the record body, then update metadata
  for (std::uint64_t k = 0; k < kKvOpsPerPhase; ++k) {
    for (std::uint64_t j = 0; j < lines; ++j) builder.write(record_addr(k, j));
    builder.write(meta_addr());
  }
  // query: read the record body and its metadata
  for (std::uint64_t i = 0; i < kKvOpsPerPhase; ++i) {
    const std::uint64_t k = rng.next_below(kKvOpsPerPhase);
    for (std::uint64_t j = 0; j < lines; ++j) builder.read(record_addr(k, j));
    builder.read(meta_addr());
  }
  // update: read-modify-write the record, update metadata
  for (std::uint64_t i = 0; i < kKvOpsPerPhase; ++i) {
    const std::uint64_t k = rng.next_below(kKvOpsPerPhase);
    for (std::uint64_t j = 0; j < lines; ++j) builder.read(record_addr(k, j));
    for (std::uint64_t j = 0; j < lines; ++j) builder.write(record_addr(k, j));
    builder.write(meta_addr());
  }
  // delete: metadata-only write
  for (std::uint64_t i = 0; i < kKvOpsPerPhase; ++i) {
    builder.write(meta_addr());
  }
  return builder.finish(spec.target_device_base, kKvOpsPerPhase * kKvPhases);
}

namespace {

[[noreturn]] void trace_error(std::size_t line_no, const std::string& why) {
  throw TraceError("trace line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

RequestTrace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");

  RequestTrace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) {
      line.erase(pos);
    }
    std::istringstream fields(line);
    std::string issue_str, op_str, addr_str, size_str;
    if (!(fields >> issue_str)) continue;  // blank or comment-only
    if (!(fields >> op_str >> addr_str >> size_str)) {
      trace_error(line_no, "expected '<issue_ns> <R|W> <addr> <size>'");
    }
    std::string extra;
    if (fields >> extra) trace_error(line_no, "trailing tokens");

    std::uint64_t issue_ns = 0, addr = 0, size = 0;
    try {
      std::size_t used = 0;
      issue_ns = std::stoull(issue_str, &used, 10);
      if (used != issue_str.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      trace_error(line_no, "bad issue time '" + issue_str + "'");
    }
    RequestKind kind;
    if (op_str == "R") {
      kind = RequestKind::Read;
    } else if (op_str == "W") {
      kind = RequestKind::Write;
    } else {
      trace_error(line_no, "unknown op '" + op_str + "' (expected R or W)");
    }
    if (addr_str.size() < 3 || addr_str[0] != '0' ||
        (addr_str[1] != 'x' && addr_str[1] != 'X')) {
      trace_error(line_no, "address must be 0x-prefixed hex");
    }
    try {
      std::size_t used = 0;
      addr = std::stoull(addr_str.substr(2), &used, 16);
      if (used != addr_str.size() - 2) throw std::invalid_argument("");
    } catch (const std::exception&) {
      trace_error(line_no, "bad address '" + addr_str + "'");
    }
    try {
      std::size_t used = 0;
      size = std::stoull(size_str, &used, 10);
      if (used != size_str.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      trace_error(line_no, "bad size '" + size_str + "'");
    }
    if (addr % kCacheLineBytes != 0) {
      trace_error(line_no, "address not 64-byte aligned");
    }
    if (size == 0) trace_error(line_no, "size must be positive");

    const std::uint64_t count = (size + kCacheLineBytes - 1) / kCacheLineBytes;
    for (std::uint64_t i = 0; i < count; ++i) {
      MemRequest req;
      req.id = static_cast<std::uint32_t>(trace.ops.size());
      req.addr = addr + i * kCacheLineBytes;
      req.kind = kind;
      req.issue_time = SimTime::from_ns(issue_ns);
      if (kind == RequestKind::Write) {
        req.payload = payload_for(req.id, req.addr);
      }
      trace.ops.push_back(TraceOp{req, false});
    }
  }
  // Trace files carry absolute addresses; bounds come from routing.
  trace.span_bytes = 0;
  return trace;
}

RequestTrace generate(const WorkloadSpec& spec) {
  switch (spec.kind) {
    case WorkloadKind::Stream: return gen_stream(spec);
    case WorkloadKind::RandLat: return gen_randlat(spec);
    case WorkloadKind::KeyValue: return gen_kv(spec);
    case WorkloadKind::TraceFile: return read_trace(spec.trace_path);
  }
  throw SimLogicError("unknown workload kind");
}

}  // namespace cxlsim
