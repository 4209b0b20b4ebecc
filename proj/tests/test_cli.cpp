// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cxlsim/config.hpp"
#include "cxlsim/errors.hpp"
#include "cxlsim/report.hpp"
#include "cxlsim/runner.hpp"

using namespace cxlsim;

namespace {

std::filesystem::path temp_path(const std::string& stem) {
  return std::filesystem::temp_directory_path() /
         (stem + "_" + std::to_string(std::random_device{}()));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(CXLSIM_TOOL_PATH) + " " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("an empty document yields the paper-table defaults") {
  const RunConfig cfg = parse_config("{}");
  CHECK(cfg.cache_capacity_bytes == 16ULL * 1024 * 1024);
  CHECK(cfg.ssd.capacity_bytes == 16ULL * 1024 * 1024 * 1024);
  CHECK(cfg.cxl_latency_ns == 25);
  CHECK(cfg.pmem.read_ns == 150);
  CHECK(cfg.pmem.write_ns == 500);
  CHECK(cfg.dram.read_ns == 45);
  CHECK(cfg.cache_hit_ns == 50);
  CHECK(cfg.seed == 42);
  CHECK(cfg.device == DeviceKind::CxlSsdCached);
  CHECK(cfg.policy == PolicyKind::LRU);  // default policy for the cached device
  CHECK(cfg.local_memory_bytes == 512ULL * 1024 * 1024);
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"cache_capcity_bytes": 1024})"),
                       doctest::Contains("cache_capcity_bytes"), ConfigError);
}

TEST_CASE("policy on a non-cached device is a validation error") {
  CHECK_THROWS_AS(parse_config(R"({"device":"dram","policy":"lru"})"),
                  ConfigError);
}

TEST_CASE("negative and mistyped numbers name the offending key") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"cache_capacity_bytes": -1})"),
                       doctest::Contains("cache_capacity_bytes"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"cache_capacity_bytes": "-1"})"),
                       doctest::Contains("cache_capacity_bytes"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"ssd_page_read_ns": 0})"),
                       doctest::Contains("ssd_page_read_ns"), ConfigError);
}

TEST_CASE("geometry errors surface at parse time") {
  CHECK_THROWS_AS(
      parse_config(R"({"cache_capacity_bytes": 12345, "cache_ways": 8})"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"value_size": 300, "workload": "kv"})"),
                  ConfigError);
}

TEST_CASE("the config echo round-trips through the parser") {
  for (const std::string text :
       {std::string("{}"),
        std::string(R"({"device":"pmem","workload":"stream","seed":7})"),
        std::string(
            R"({"device":"cxl-ssd-cached","policy":"2q","workload":"kv",
                "value_size":532,"cache_ways":4,"ssd_queue_width":2,
                "sweep":"policy","sweep_values":["lru","2q"]})")}) {
    const RunConfig cfg = parse_config(text);
    const RunConfig back = parse_config(config_to_json_text(cfg));
    CHECK(back == cfg);
  }
}

TEST_CASE("report JSON parses back to the identical document") {
  RunConfig cfg;
  cfg.device = DeviceKind::CxlDram;
  cfg.op_count = 500;
  const RunResult result = run(cfg);
  const std::string text = report_to_json(result);
  // Round-trip through the JSON layer: identical serialization.
  const RunConfig echoed = parse_config(config_to_json_text(result.config));
  CHECK(echoed == result.config);
  CHECK(text.find("\"qps\": \"na\"") != std::string::npos);
  CHECK(text.find("\"cache\": \"na\"") != std::string::npos);
}

TEST_CASE("csv output has one header and one row per run") {
  RunConfig cfg;
  cfg.device = DeviceKind::Dram;
  cfg.op_count = 64;
  cfg.sweep = "device";
  cfg.sweep_values = {"dram", "cxl-dram", "pmem", "cxl-ssd", "cxl-ssd-cached"};
  const SweepOutcome outcome = run_sweep(cfg);
  REQUIRE_FALSE(outcome.error.has_value());
  const std::string csv = reports_to_csv(outcome.results);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 6);  // header + 5 rows
  CHECK(csv.rfind("device,policy,workload", 0) == 0);
  // not-applicable cells carry a literal na, never an empty cell
  CHECK(csv.find(",,") == std::string::npos);
  CHECK(csv.find("na") != std::string::npos);
}

TEST_CASE("sweep runs match the same configs run individually") {
  RunConfig base;
  base.device = DeviceKind::CxlSsdCached;
  base.policy = PolicyKind::LRU;
  base.op_count = 2000;
  base.footprint_bytes = 1 << 22;
  base.sweep = "policy";
  base.sweep_values = {"lru", "fifo"};
  const SweepOutcome outcome = run_sweep(base);
  REQUIRE(outcome.results.size() == 2);

  RunConfig single = base;
  single.sweep.clear();
  single.sweep_values.clear();
  single.policy = PolicyKind::FIFO;
  const RunResult alone = run(single);
  CHECK(report_to_json(alone) == report_to_json(outcome.results[1]));
}

TEST_CASE("an explicitly empty sweep value list is an error") {
  RunConfig cfg;
  cfg.device = DeviceKind::Dram;
  cfg.sweep = "device";
  cfg.sweep_values = {};  // empty means "use defaults"
  // Explicit empty list arrives via the values argument path:
  CHECK_THROWS_AS(default_sweep_values("latency"), ConfigError);
  RunConfig bad = cfg;
  bad.sweep = "latency";
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("a failing run fails the sweep but keeps finished results") {
  RunConfig cfg;
  cfg.device = DeviceKind::Dram;
  cfg.op_count = 128;
  cfg.sweep = "device";
  cfg.sweep_values = {"dram", "accelerator", "pmem"};
  const SweepOutcome outcome = run_sweep(cfg);
  REQUIRE(outcome.error.has_value());
  CHECK(*outcome.failed_value == "accelerator");
  CHECK(outcome.results.size() == 1);  // dram finished before the failure
}

TEST_CASE("cli exit codes distinguish config, simulation and io errors") {
  CHECK(run_tool("--device dram --ops 64") == 0);
  CHECK(run_tool("--device floppy") == 2);                    // config error
  CHECK(run_tool("--device dram --policy lru") == 2);         // invariant
  CHECK(run_tool("--unknown-flag") == 2);                     // flag error
  CHECK(run_tool("--device dram --ops 64 --output /nonexistent-dir/x.json") ==
        4);  // io error

  const auto trace = temp_path("oob_trace");
  {
    std::ofstream out(trace);
    out << "0 R 0x10000000000 64\n";  // beyond every mapped range
  }
  CHECK(run_tool("--workload tracefile --trace " + trace.string() +
                 " --device dram") == 3);  // simulation fault
  const auto bad_trace = temp_path("bad_trace");
  {
    std::ofstream out(bad_trace);
    out << "0 X 0x0 64\n";
  }
  CHECK(run_tool("--workload tracefile --trace " + bad_trace.string() +
                 " --device dram") == 2);  // parse error
  std::remove(trace.string().c_str());
  std::remove(bad_trace.string().c_str());
}

TEST_CASE("cli runs are reproducible byte for byte") {
  const auto out = temp_path("rep");
  const std::string args = "--device cxl-ssd-cached --workload randlat "
                           "--ops 5000 --footprint 4194304 --seed 9 "
                           "--output " + out.string();
  REQUIRE(run_tool(args) == 0);
  const std::string a = slurp(out);
  REQUIRE(run_tool(args) == 0);
  const std::string b = slurp(out);
  CHECK(a == b);
  CHECK_FALSE(a.empty());
  std::remove(out.string().c_str());
}

TEST_CASE("config files combine with flag overrides") {
  const auto cfg_path = temp_path("cfg");
  {
    std::ofstream out(cfg_path);
    out << R"({"device":"pmem","op_count":32,"seed":5})";
  }
  const auto out_path = temp_path("combined");
  REQUIRE(run_tool("--config " + cfg_path.string() + " --device cxl-dram "
                   "--output " + out_path.string()) == 0);
  const std::string text = slurp(out_path);
  CHECK(text.find("\"device\": \"cxl-dram\"") != std::string::npos);
  CHECK(text.find("\"seed\": 5") != std::string::npos);
  std::remove(cfg_path.string().c_str());
  std::remove(out_path.string().c_str());
}
