// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/event_queue.hpp"

#include <algorithm>
#include <string>

#include "cxlsim/errors.hpp"

namespace cxlsim {

bool Engine::later(const Event& a, const Event& b) {
  if (a.due.ticks != b.due.ticks) return a.due.ticks > b.due.ticks;
  return a.sequence > b.sequence;
}

void Engine::schedule(SimTime due, std::function<void()> action) {
  if (due < now_) {
    throw SimLogicError("schedule: event due at " +
                        std::to_string(due.ticks) + " ps is in the past (now " +
                        std::to_string(now_.ticks) + " ps)");
  }
  heap_.push_back(Event{due, next_sequence_++, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), later);
}

SimTime Engine::run_until_idle() {
  while (!heap_.empty()) {
    if (dispatched_ >= max_events_) {
      throw EventBudgetError(
          "event budget exhausted after " + std::to_string(dispatched_) +
          " events; likely a self-rescheduling event loop");
    }
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Event event = std::move(heap_.back());
    heap_.pop_back();

    now_ = event.due;  // monotone: schedule() rejects past times
    ++dispatched_;
    event.action();
  }
  return now_;
}

}  // namespace cxlsim
