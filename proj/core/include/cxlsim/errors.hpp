// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cxlsim {

// Base class for every failure the simulator raises on purpose.
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration value or workload specification.
struct ConfigError : SimError {
  using SimError::SimError;
};

// Access outside every mapped address range, or an out-of-range LBA.
struct AddressFault : SimError {
  using SimError::SimError;
};

// Broken internal contract: scheduling in the past, completing a miss
// twice, responding to a response, and similar programming errors.
struct SimLogicError : SimError {
  using SimError::SimError;
};

// Event budget exhausted; guards against runaway event loops.
struct EventBudgetError : SimError {
  using SimError::SimError;
};

// Malformed trace file.
struct TraceError : SimError {
  using SimError::SimError;
};

// Filesystem failure on an input or output path.
struct IoError : SimError {
  using SimError::SimError;
};

}  // namespace cxlsim
