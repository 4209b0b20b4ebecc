// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace cxlsim {

enum class PolicyKind : std::uint8_t { Direct, LRU, FIFO, TwoQ, LFRU };

PolicyKind parse_policy(const std::string& name);  // throws ConfigError
std::string to_string(PolicyKind kind);

struct PolicyParams {
  std::uint64_t lfru_aging_period = 1024;  // set accesses between halvings
};

// Per-set replacement bookkeeping behind a common interface. The cache
// drives it with a fixed call pattern, one access at a time:
//
//   note_access(set)                      once per access, before anything
//   on_touch(set, way)                    on a hit
//   on_install(set, way)                  on a miss fill (no touch)
//
// Stamps come from a single monotonically increasing counter bumped once
// per on_touch/on_install, so victim choices are always unique and runs
// reproduce exactly.
//
// Policy definitions, pinned for the oracle tests:
//   Direct  single way per set; victim is trivially way 0.
//   LRU     victim = smallest touch stamp; hits refresh the stamp.
//   FIFO    victim = smallest install stamp; hits do not refresh.
//   TwoQ    new pages enter the A1in FIFO; a hit while in A1in promotes
//           the page to the Am LRU queue. Victim comes from A1in's front
//           when |A1in| exceeds its quota (max(1, ways/4)), else from
//           Am's LRU tail; an empty Am falls back to A1in.
//   LFRU    frequency-primary: install sets freq 1, hits increment.
//           Victim = smallest (freq, touch stamp). Every
//           lfru_aging_period accesses to a set, all its frequency
//           counters halve (floor), applied before that access.
class ReplacementPolicy {
 public:
  virtual ~ReplacementPolicy() = default;

  virtual void note_access(std::uint32_t set) { (void)set; }
  virtual void on_install(std::uint32_t set, std::uint32_t way) = 0;
  virtual void on_touch(std::uint32_t set, std::uint32_t way) = 0;

  // Chooses the victim among ways where evictable[way] is true; the
  // caller guarantees at least one. In the synchronous path every way is
  // valid by the time a victim is needed.
  virtual std::uint32_t victim(std::uint32_t set,
                               const std::vector<bool>& evictable) const = 0;

  static std::unique_ptr<ReplacementPolicy> create(PolicyKind kind,
                                                   std::uint32_t num_sets,
                                                   std::uint32_t ways,
                                                   const PolicyParams& params);
};

}  // namespace cxlsim
