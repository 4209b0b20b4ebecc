// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cxlsim/replacement.hpp"
#include "cxlsim/types.hpp"

namespace cxlsim {

// Set-associative geometry over 4KB pages. Direct mapping forces one
// way; the set index is page_number mod num_sets.
struct CacheGeometry {
  std::uint64_t capacity_bytes = 16ULL * 1024 * 1024;
  std::uint32_t page_size = kPageBytes;
  std::uint32_t ways = 8;

  std::uint32_t num_sets() const {
    return static_cast<std::uint32_t>(capacity_bytes /
                                      (std::uint64_t{page_size} * ways));
  }
  std::uint32_t frames() const { return num_sets() * ways; }
  void validate() const;  // throws ConfigError
};

struct VictimPage {
  std::uint64_t page_number;
  bool dirty;
};

// Result of one synchronous access: hit, or miss with the page evicted
// to make room (none while the set still has a free way).
struct AccessOutcome {
  bool hit;
  std::optional<VictimPage> victim;
};

// DRAM page cache: 4KB pages with valid/dirty bits, write-back
// write-allocate, pluggable replacement. Tag state only; the caller owns
// the data frames, addressed by the frame index this class hands out
// (set * ways + way).
//
// Two driving styles share one state machine:
//  - access() resolves a whole miss synchronously (probe, evict,
//    install) and is the reference semantics for the policy oracles;
//  - probe_touch() / reserve_for_fill() / install() split the same steps
//    around an in-flight backend fill. A reserved way sits in Pending
//    state: it is neither hittable nor evictable until install().
class DramPageCache {
 public:
  DramPageCache(const CacheGeometry& geometry, PolicyKind policy,
                const PolicyParams& params = {});

  // Synchronous access at line address granularity (addr in bytes).
  AccessOutcome access(std::uint64_t addr, AccessKind kind);
  // Same, taking a page number directly.
  AccessOutcome access_page(std::uint64_t page_number, AccessKind kind);

  // Asynchronous split path.
  bool probe_touch(std::uint64_t page_number, AccessKind kind);
  struct Reservation {
    std::uint32_t frame;
    std::optional<VictimPage> victim;
  };
  // Claims a way for an incoming fill; nullopt when every way of the set
  // is pending (structural stall, caller retries later).
  std::optional<Reservation> reserve_for_fill(std::uint64_t page_number);
  void install(std::uint64_t page_number);     // pending -> valid, clean
  void mark_dirty(std::uint64_t page_number);  // valid pages only
  void touch(std::uint64_t page_number);       // extra hit on a valid page

  // Writes back every dirty page (returned in set/way scan order) and
  // clears the dirty bits. Pages stay resident.
  std::vector<std::uint64_t> flush_all();

  bool resident(std::uint64_t page_number) const;
  bool dirty_page(std::uint64_t page_number) const;
  // Frame index of a valid or pending page, for the caller's data array.
  std::optional<std::uint32_t> frame_of(std::uint64_t page_number) const;

  const CacheGeometry& geometry() const { return geometry_; }
  PolicyKind policy() const { return policy_kind_; }
  std::uint32_t set_of(std::uint64_t page_number) const {
    return static_cast<std::uint32_t>(page_number & (num_sets_ - 1));
  }

 private:
  enum class WayState : std::uint8_t { Free, Pending, Valid };
  struct Way {
    WayState state = WayState::Free;
    bool dirty = false;
    std::uint64_t page = 0;
  };

  Way* find(std::uint64_t page_number, WayState state);
  const Way* find(std::uint64_t page_number, WayState state) const;
  Way& way_at(std::uint32_t set, std::uint32_t w) {
    return ways_[std::size_t{set} * geometry_.ways + w];
  }
  const Way& way_at(std::uint32_t set, std::uint32_t w) const {
    return ways_[std::size_t{set} * geometry_.ways + w];
  }

  CacheGeometry geometry_;
  PolicyKind policy_kind_;
  std::uint32_t num_sets_;
  std::unique_ptr<ReplacementPolicy> policy_;
  std::vector<Way> ways_;
};

}  // namespace cxlsim
