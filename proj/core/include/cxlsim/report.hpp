// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "cxlsim/runner.hpp"

namespace cxlsim {

// Report serialization. Fields that do not apply carry the literal "na"
// (JSON string / CSV cell), never an empty cell or NaN. Number
// formatting uses shortest-round-trip so identical runs emit identical
// bytes.

std::string report_to_json(const RunResult& result);
std::string reports_to_json(std::span<const RunResult> results);

// One header row plus one data row per run, columns in the order of
// kCsvHeader.
extern const char* const kCsvHeader;
std::string reports_to_csv(std::span<const RunResult> results);

// Human-oriented side-by-side table for sweeps.
std::string sweep_table(std::span<const std::string> values,
                        std::span<const RunResult> results);

// Writes text to path ("" or "-" = stdout). Throws IoError on failure.
void write_output(const std::string& path, const std::string& text);

}  // namespace cxlsim
