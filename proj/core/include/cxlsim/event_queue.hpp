// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cxlsim/time.hpp"

namespace cxlsim {

// One scheduled action. Events with equal due time dispatch in insertion
// order (ascending sequence), which makes runs bit-reproducible.
struct Event {
  SimTime due;
  std::uint64_t sequence = 0;
  std::function<void()> action;
};

// Deterministic single-threaded discrete-event engine. One engine owns
// one run; independent engines never share state and may run on
// separate threads for parameter sweeps.
class Engine {
 public:
  static constexpr std::uint64_t kDefaultEventBudget = 1'000'000'000ULL;

  explicit Engine(std::uint64_t max_events = kDefaultEventBudget)
      : max_events_(max_events) {}

  SimTime now() const { return now_; }
  std::uint64_t dispatched() const { return dispatched_; }
  std::size_t pending() const { return heap_.size(); }

  // Scheduling in the past is a logic error, not a clamp.
  void schedule(SimTime due, std::function<void()> action);
  void schedule_in(SimTime delay, std::function<void()> action) {
    schedule(now_ + delay, std::move(action));
  }

  // Dispatches until the queue drains; returns the clock after the last
  // event (0 if nothing was queued). Throws EventBudgetError once more
  // than max_events events have dispatched.
  SimTime run_until_idle();

 private:
  static bool later(const Event& a, const Event& b);

  std::vector<Event> heap_;
  SimTime now_{};
  std::uint64_t next_sequence_ = 0;
  std::uint64_t dispatched_ = 0;
  std::uint64_t max_events_;
};

}  // namespace cxlsim
