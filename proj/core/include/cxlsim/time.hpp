// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>

namespace cxlsim {

// Simulated time as an integer tick count, 1 tick = 1 picosecond.
// Every nanosecond-denominated parameter converts exactly (x1000), so
// latency compositions never accumulate rounding error.
struct SimTime {
  std::uint64_t ticks = 0;

  static constexpr std::uint64_t kTicksPerNs = 1000;

  static constexpr SimTime from_ns(std::uint64_t ns) {
    return SimTime{ns * kTicksPerNs};
  }

  constexpr double ns() const {
    return static_cast<double>(ticks) / static_cast<double>(kTicksPerNs);
  }

  constexpr double seconds() const {
    return static_cast<double>(ticks) * 1e-12;
  }

  friend constexpr auto operator<=>(const SimTime&, const SimTime&) = default;

  friend constexpr SimTime operator+(SimTime a, SimTime b) {
    return SimTime{a.ticks + b.ticks};
  }
  friend constexpr SimTime operator-(SimTime a, SimTime b) {
    return SimTime{a.ticks - b.ticks};
  }
  SimTime& operator+=(SimTime other) {
    ticks += other.ticks;
    return *this;
  }
};

}  // namespace cxlsim
