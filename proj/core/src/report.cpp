// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "cxlsim/errors.hpp"

namespace cxlsim {

using json = nlohmann::ordered_json;

namespace {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

json opt_number(const std::optional<double>& value) {
  if (!value) return json("na");
  return json(*value);
}

json latency_json(const LatencySummary& lat) {
  if (lat.count == 0) return json("na");
  json j;
  j["count"] = lat.count;
  j["min"] = static_cast<double>(lat.min_ticks) / SimTime::kTicksPerNs;
  j["mean"] = lat.mean_ns();
  j["p50"] = static_cast<double>(lat.p50_ticks) / SimTime::kTicksPerNs;
  j["p95"] = static_cast<double>(lat.p95_ticks) / SimTime::kTicksPerNs;
  j["p99"] = static_cast<double>(lat.p99_ticks) / SimTime::kTicksPerNs;
  j["max"] = static_cast<double>(lat.max_ticks) / SimTime::kTicksPerNs;
  return j;
}

json config_json(const RunConfig& cfg) {
  return json::parse(config_to_json_text(cfg));
}

json result_json(const RunResult& result) {
  const StatsReport& s = result.stats;
  json j;
  j["config"] = config_json(result.config);

  json stats;
  json requests;
  requests["total"] = s.requests;
  requests["reads"] = s.reads;
  requests["writes"] = s.writes;
  requests["dropped"] = s.dropped;
  stats["requests"] = requests;

  stats["latency_ns"] = latency_json(s.latency);
  stats["bandwidth_mbps"] = opt_number(s.bandwidth_mbps());
  stats["qps"] = opt_number(s.qps());

  if (s.cache_present) {
    json cache;
    cache["hits"] = s.cache_hits;
    cache["misses"] = s.cache_misses;
    cache["hit_rate"] = opt_number(s.hit_rate());
    stats["cache"] = cache;
  } else {
    stats["cache"] = "na";
  }

  if (s.ssd_present) {
    json ssd;
    ssd["page_reads"] = s.ssd_page_reads;
    ssd["page_programs"] = s.ssd_page_programs;
    ssd["dirty_writebacks"] = s.dirty_writebacks;
    ssd["flush_writebacks"] = s.flush_writebacks;
    stats["ssd"] = ssd;
    json amp;
    amp["read"] = opt_number(s.read_amplification());
    amp["write"] = opt_number(s.write_amplification());
    stats["amplification"] = amp;
  } else {
    stats["ssd"] = "na";
    stats["amplification"] = "na";
  }

  if (s.cxl_link) {
    json meta;
    meta["any"] = s.meta_any;
    meta["invalid"] = s.meta_invalid;
    meta["shared"] = s.meta_shared;
    stats["meta_values"] = meta;
  } else {
    stats["meta_values"] = "na";
  }

  json bytes;
  bytes["request_read"] = s.request_read_bytes;
  bytes["request_write"] = s.request_write_bytes;
  bytes["backend_read"] = s.backend_read_bytes;
  bytes["backend_write"] = s.backend_write_bytes;
  stats["bytes"] = bytes;

  stats["simulated_ns"] = s.simulated_end.ns();
  stats["events"] = s.events_dispatched;
  j["stats"] = stats;
  return j;
}

std::string csv_cell_double(const std::optional<double>& value) {
  if (!value) return "na";
  return format_double(*value);
}

std::string csv_ticks(std::uint64_t ticks) {
  return format_double(static_cast<double>(ticks) / SimTime::kTicksPerNs);
}

}  // namespace

std::string report_to_json(const RunResult& result) {
  return result_json(result).dump(2) + "\n";
}

std::string reports_to_json(std::span<const RunResult> results) {
  json arr = json::array();
  for (const RunResult& r : results) arr.push_back(result_json(r));
  return arr.dump(2) + "\n";
}

const char* const kCsvHeader =
    "device,policy,workload,value_size,footprint_bytes,op_count,seed,"
    "requests,reads,writes,dropped,"
    "min_ns,mean_ns,p50_ns,p95_ns,p99_ns,max_ns,"
    "bandwidth_mbps,qps,cache_hits,cache_misses,hit_rate,"
    "ssd_page_reads,ssd_page_programs,dirty_writebacks,flush_writebacks,"
    "read_amplification,write_amplification,simulated_ns";

std::string reports_to_csv(std::span<const RunResult> results) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const RunResult& result : results) {
    const RunConfig& c = result.config;
    const StatsReport& s = result.stats;
    out << to_string(c.device) << ',';
    out << (c.policy ? to_string(*c.policy) : "na") << ',';
    out << to_string(c.workload) << ',';
    if (c.workload == WorkloadKind::KeyValue) {
      out << c.value_size;
    } else {
      out << "na";
    }
    out << ',' << c.footprint_bytes << ',' << c.op_count << ',' << c.seed
        << ',';
    out << s.requests << ',' << s.reads << ',' << s.writes << ','
        << s.dropped << ',';
    if (s.latency.count > 0) {
      out << csv_ticks(s.latency.min_ticks) << ','
          << format_double(s.latency.mean_ns()) << ','
          << csv_ticks(s.latency.p50_ticks) << ','
          << csv_ticks(s.latency.p95_ticks) << ','
          << csv_ticks(s.latency.p99_ticks) << ','
          << csv_ticks(s.latency.max_ticks) << ',';
    } else {
      out << "na,na,na,na,na,na,";
    }
    out << csv_cell_double(s.bandwidth_mbps()) << ','
        << csv_cell_double(s.qps()) << ',';
    if (s.cache_present) {
      out << s.cache_hits << ',' << s.cache_misses << ','
          << csv_cell_double(s.hit_rate()) << ',';
    } else {
      out << "na,na,na,";
    }
    if (s.ssd_present) {
      out << s.ssd_page_reads << ',' << s.ssd_page_programs << ','
          << s.dirty_writebacks << ',' << s.flush_writebacks << ','
          << csv_cell_double(s.read_amplification()) << ','
          << csv_cell_double(s.write_amplification()) << ',';
    } else {
      out << "na,na,na,na,na,na,";
    }
    out << format_double(s.simulated_end.ns()) << "\n";
  }
  return out.str();
}

std::string sweep_table(std::span<const std::string> values,
                        std::span<const RunResult> results) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-16s %14s %14s %14s %14s %10s\n",
                "value", "mean_ns", "p99_ns", "bw_mbps", "qps", "hit_rate");
  out << line;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const StatsReport& s = results[i].stats;
    const std::string mean =
        s.latency.count ? format_double(s.latency.mean_ns()) : "na";
    const std::string p99 = s.latency.count
                                ? csv_ticks(s.latency.p99_ticks)
                                : "na";
    std::snprintf(line, sizeof(line), "%-16s %14s %14s %14s %14s %10s\n",
                  values[i].c_str(), mean.c_str(), p99.c_str(),
                  csv_cell_double(s.bandwidth_mbps()).c_str(),
                  csv_cell_double(s.qps()).c_str(),
                  csv_cell_double(s.hit_rate()).c_str());
    out << line;
  }
  return out.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output path '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing output to '" + path + "'");
}

}  // namespace cxlsim
