// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/config.hpp"

#include <limits>

#include "json.hpp"

#include "cxlsim/cache.hpp"
#include "cxlsim/errors.hpp"

namespace cxlsim {

using json = nlohmann::ordered_json;

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw ConfigError("unknown format '" + name + "' (expected json|csv)");
}

std::string to_string(OutputFormat format) {
  return format == OutputFormat::Json ? "json" : "csv";
}

namespace {

std::uint64_t get_u64(const json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  if (!value.is_number_unsigned() && value.get<std::int64_t>() < 0) {
    throw ConfigError("config key '" + key + "' must be non-negative");
  }
  return value.get<std::uint64_t>();
}

std::uint64_t get_positive_u64(const json& value, const std::string& key) {
  const std::uint64_t v = get_u64(value, key);
  if (v == 0) throw ConfigError("config key '" + key + "' must be positive");
  return v;
}

std::uint32_t get_u32(const json& value, const std::string& key) {
  const std::uint64_t v = get_u64(value, key);
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("config key '" + key + "' is out of range");
  }
  return static_cast<std::uint32_t>(v);
}

std::string get_string(const json& value, const std::string& key) {
  if (!value.is_string()) {
    throw ConfigError("config key '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config document must be a JSON object");
  }

  RunConfig cfg;
  bool policy_given = false;

  for (const auto& [key, value] : doc.items()) {
    if (key == "device") {
      cfg.device = parse_device(get_string(value, key));
    } else if (key == "policy") {
      cfg.policy = parse_policy(get_string(value, key));
      policy_given = true;
    } else if (key == "workload") {
      cfg.workload = parse_workload(get_string(value, key));
    } else if (key == "trace_path") {
      cfg.trace_path = get_string(value, key);
    } else if (key == "footprint_bytes") {
      cfg.footprint_bytes = get_u64(value, key);
    } else if (key == "op_count") {
      cfg.op_count = get_u64(value, key);
    } else if (key == "value_size") {
      cfg.value_size = get_u32(value, key);
    } else if (key == "kv_metadata_bytes") {
      cfg.kv_metadata_bytes = get_positive_u64(value, key);
    } else if (key == "seed") {
      cfg.seed = get_u64(value, key);
    } else if (key == "cxl_latency_ns") {
      cfg.cxl_latency_ns = get_u64(value, key);
    } else if (key == "dram_read_ns") {
      cfg.dram.read_ns = get_positive_u64(value, key);
    } else if (key == "dram_write_ns") {
      cfg.dram.write_ns = get_positive_u64(value, key);
    } else if (key == "pmem_read_ns") {
      cfg.pmem.read_ns = get_positive_u64(value, key);
    } else if (key == "pmem_write_ns") {
      cfg.pmem.write_ns = get_positive_u64(value, key);
    } else if (key == "cache_hit_ns") {
      cfg.cache_hit_ns = get_positive_u64(value, key);
    } else if (key == "local_memory_bytes") {
      cfg.local_memory_bytes = get_positive_u64(value, key);
    } else if (key == "cxl_window_base") {
      cfg.cxl_window_base = get_positive_u64(value, key);
    } else if (key == "cache_capacity_bytes") {
      cfg.cache_capacity_bytes = get_positive_u64(value, key);
    } else if (key == "cache_ways") {
      cfg.cache_ways = get_u32(value, key);
    } else if (key == "mshr_entries") {
      cfg.mshr_entries = get_u32(value, key);
    } else if (key == "lfru_aging_period") {
      cfg.lfru_aging_period = get_positive_u64(value, key);
    } else if (key == "ssd_capacity_bytes") {
      cfg.ssd.capacity_bytes = get_positive_u64(value, key);
    } else if (key == "ssd_page_read_ns") {
      cfg.ssd.page_read_ns = get_positive_u64(value, key);
    } else if (key == "ssd_page_program_ns") {
      cfg.ssd.page_program_ns = get_positive_u64(value, key);
    } else if (key == "ssd_queue_width") {
      cfg.ssd.queue_width = get_u32(value, key);
    } else if (key == "max_outstanding") {
      cfg.max_outstanding = get_u32(value, key);
    } else if (key == "max_events") {
      cfg.max_events = get_positive_u64(value, key);
    } else if (key == "output") {
      cfg.output = get_string(value, key);
    } else if (key == "format") {
      cfg.format = parse_format(get_string(value, key));
    } else if (key == "sweep") {
      cfg.sweep = get_string(value, key);
    } else if (key == "sweep_values") {
      if (!value.is_array()) {
        throw ConfigError("config key 'sweep_values' must be an array");
      }
      cfg.sweep_values.clear();
      for (const auto& entry : value) {
        cfg.sweep_values.push_back(get_string(entry, key));
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (policy_given && cfg.device != DeviceKind::CxlSsdCached) {
    throw ConfigError(
        "config key 'policy' applies only to device 'cxl-ssd-cached'");
  }
  if (cfg.device == DeviceKind::CxlSsdCached && !cfg.policy) {
    cfg.policy = PolicyKind::LRU;
  }
  validate(cfg);
  return cfg;
}

void validate(const RunConfig& cfg) {
  if ((cfg.device == DeviceKind::CxlSsdCached) != cfg.policy.has_value()) {
    throw ConfigError("policy must be set exactly for device cxl-ssd-cached");
  }
  if (cfg.workload == WorkloadKind::TraceFile && cfg.trace_path.empty()) {
    throw ConfigError("workload tracefile requires 'trace_path'");
  }
  if (cfg.workload == WorkloadKind::KeyValue && cfg.value_size != 216 &&
      cfg.value_size != 532) {
    throw ConfigError("config key 'value_size' must be 216 or 532");
  }
  if (cfg.cache_ways == 0) {
    throw ConfigError("config key 'cache_ways' must be >= 1");
  }
  if (cfg.mshr_entries == 0) {
    throw ConfigError("config key 'mshr_entries' must be >= 1");
  }
  if (cfg.max_outstanding == 0) {
    throw ConfigError("config key 'max_outstanding' must be >= 1");
  }
  if (cfg.device == DeviceKind::CxlSsdCached) {
    CacheGeometry geometry{cfg.cache_capacity_bytes, kPageBytes,
                           cfg.policy == PolicyKind::Direct ? 1u
                                                            : cfg.cache_ways};
    geometry.validate();
  }
  if (cfg.cxl_window_base < cfg.local_memory_bytes) {
    throw ConfigError(
        "'cxl_window_base' must not overlap local memory "
        "('local_memory_bytes')");
  }
  cfg.ssd.validate();
  if (cfg.sweep != "" && cfg.sweep != "device" && cfg.sweep != "policy") {
    throw ConfigError("config key 'sweep' must be 'device' or 'policy'");
  }
}

std::string config_to_json_text(const RunConfig& cfg) {
  json doc;
  doc["device"] = to_string(cfg.device);
  if (cfg.policy) doc["policy"] = to_string(*cfg.policy);
  doc["workload"] = to_string(cfg.workload);
  doc["trace_path"] = cfg.trace_path;
  doc["footprint_bytes"] = cfg.footprint_bytes;
  doc["op_count"] = cfg.op_count;
  doc["value_size"] = cfg.value_size;
  doc["kv_metadata_bytes"] = cfg.kv_metadata_bytes;
  doc["seed"] = cfg.seed;
  doc["cxl_latency_ns"] = cfg.cxl_latency_ns;
  doc["dram_read_ns"] = cfg.dram.read_ns;
  doc["dram_write_ns"] = cfg.dram.write_ns;
  doc["pmem_read_ns"] = cfg.pmem.read_ns;
  doc["pmem_write_ns"] = cfg.pmem.write_ns;
  doc["cache_hit_ns"] = cfg.cache_hit_ns;
  doc["local_memory_bytes"] = cfg.local_memory_bytes;
  doc["cxl_window_base"] = cfg.cxl_window_base;
  doc["cache_capacity_bytes"] = cfg.cache_capacity_bytes;
  doc["cache_ways"] = cfg.cache_ways;
  doc["mshr_entries"] = cfg.mshr_entries;
  doc["lfru_aging_period"] = cfg.lfru_aging_period;
  doc["ssd_capacity_bytes"] = cfg.ssd.capacity_bytes;
  doc["ssd_page_read_ns"] = cfg.ssd.page_read_ns;
  doc["ssd_page_program_ns"] = cfg.ssd.page_program_ns;
  doc["ssd_queue_width"] = cfg.ssd.queue_width;
  doc["max_outstanding"] = cfg.max_outstanding;
  doc["max_events"] = cfg.max_events;
  doc["output"] = cfg.output;
  doc["format"] = to_string(cfg.format);
  doc["sweep"] = cfg.sweep;
  doc["sweep_values"] = cfg.sweep_values;
  return doc.dump(2);
}

WorkloadSpec workload_spec_from(const RunConfig& cfg) {
  WorkloadSpec spec;
  spec.kind = cfg.workload;
  spec.footprint_bytes = cfg.footprint_bytes;
  spec.op_count = cfg.op_count;
  spec.value_size = cfg.value_size;
  spec.seed = cfg.seed;
  spec.metadata_bytes = cfg.kv_metadata_bytes;
  spec.trace_path = cfg.trace_path;
  // All workloads target the device-under-test window so the same trace
  // replays unchanged across every device in a sweep.
  spec.target_device_base = cfg.cxl_window_base;
  return spec;
}

DeviceLatencyParams latency_params_from(const RunConfig& cfg) {
  DeviceLatencyParams params;
  params.dram = cfg.dram;
  params.pmem = cfg.pmem;
  params.cxl_port_ns = cfg.cxl_latency_ns;
  params.cache_hit_ns = cfg.cache_hit_ns;
  params.ssd_page_read_ns = cfg.ssd.page_read_ns;
  params.ssd_page_program_ns = cfg.ssd.page_program_ns;
  return params;
}

}  // namespace cxlsim
