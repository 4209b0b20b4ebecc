// SPDX-License-Identifier: Apache-2.0
//
// cxlsim command line front end: single runs and device/policy sweeps
// over the simulated memory expander, reports emitted as JSON or CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cxlsim/config.hpp"
#include "cxlsim/errors.hpp"
#include "cxlsim/report.hpp"
#include "cxlsim/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitSimFault = 3;
constexpr int kExitIoError = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cxlsim::IoError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_cli(int argc, char** argv) {
  CLI::App app{
      "cxlsim - discrete-event simulator of a CXL.mem-attached SSD memory "
      "expander with a DRAM page cache"};

  std::string config_path, device, policy, workload, trace, output, format;
  std::string sweep, sweep_values;
  std::optional<std::uint64_t> seed, footprint, ops;
  std::optional<std::uint32_t> value_size;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--device", device,
                 "dram|cxl-dram|pmem|cxl-ssd|cxl-ssd-cached");
  app.add_option("--policy", policy,
                 "direct|lru|fifo|2q|lfru (cached device only)");
  app.add_option("--workload", workload, "stream|randlat|kv|tracefile");
  app.add_option("--trace", trace, "trace file path (workload tracefile)");
  app.add_option("--seed", seed, "workload RNG seed");
  app.add_option("--footprint", footprint, "workload footprint in bytes");
  app.add_option("--ops", ops, "operation count (randlat)");
  app.add_option("--value-size", value_size, "key-value record size: 216|532");
  app.add_option("--output", output, "report path (default: stdout)");
  app.add_option("--format", format, "json|csv");
  app.add_option("--sweep", sweep, "sweep axis: device|policy");
  app.add_option("--sweep-values", sweep_values,
                 "comma-separated axis values (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  // Config file first, then flags override individual values.
  const std::string text = config_path.empty() ? "{}" : read_file(config_path);
  cxlsim::RunConfig cfg = cxlsim::parse_config(text);

  if (!device.empty()) {
    cfg.device = cxlsim::parse_device(device);
    if (cfg.device == cxlsim::DeviceKind::CxlSsdCached) {
      if (!cfg.policy) cfg.policy = cxlsim::PolicyKind::LRU;
    } else if (policy.empty()) {
      cfg.policy.reset();
    }
  }
  if (!policy.empty()) {
    cfg.policy = cxlsim::parse_policy(policy);
    if (cfg.device != cxlsim::DeviceKind::CxlSsdCached) {
      throw cxlsim::ConfigError(
          "--policy applies only to device 'cxl-ssd-cached'");
    }
  }
  if (!workload.empty()) cfg.workload = cxlsim::parse_workload(workload);
  if (!trace.empty()) cfg.trace_path = trace;
  if (seed) cfg.seed = *seed;
  if (footprint) cfg.footprint_bytes = *footprint;
  if (ops) cfg.op_count = *ops;
  if (value_size) cfg.value_size = *value_size;
  if (!output.empty()) cfg.output = output;
  if (!format.empty()) cfg.format = cxlsim::parse_format(format);
  if (!sweep.empty()) cfg.sweep = sweep;
  if (!sweep_values.empty()) cfg.sweep_values = split_csv(sweep_values);
  cxlsim::validate(cfg);

  if (!cfg.sweep.empty()) {
    const cxlsim::SweepOutcome outcome = cxlsim::run_sweep(cfg);
    const std::string report =
        cfg.format == cxlsim::OutputFormat::Json
            ? cxlsim::reports_to_json(outcome.results)
            : cxlsim::reports_to_csv(outcome.results);
    cxlsim::write_output(cfg.output, report);

    // Side-by-side table goes wherever the report does not.
    std::ostream& table_out = cfg.output.empty() ? std::cerr : std::cout;
    table_out << cxlsim::sweep_table(
        std::span(outcome.values.data(), outcome.results.size()),
        outcome.results);
    if (outcome.error) {
      std::cerr << "sweep failed at value '" << *outcome.failed_value
                << "': " << *outcome.error << "\n"
                << "partial results saved (" << outcome.results.size()
                << " of " << outcome.values.size() << " runs)\n";
      return kExitSimFault;
    }
    return kExitOk;
  }

  const cxlsim::RunResult result = cxlsim::run(cfg);
  const std::string report =
      cfg.format == cxlsim::OutputFormat::Json
          ? cxlsim::report_to_json(result)
          : cxlsim::reports_to_csv(std::span(&result, 1));
  cxlsim::write_output(cfg.output, report);
  if (!cfg.output.empty()) {
    std::cout << "report written to " << cfg.output << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const cxlsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const cxlsim::TraceError& e) {
    std::cerr << "trace error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const cxlsim::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const cxlsim::SimError& e) {
    // AddressFault, SimLogicError, EventBudgetError
    std::cerr << "simulation fault: " << e.what() << "\n";
    return kExitSimFault;
  }
}
