// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace cxlsim {

enum class MshrResult : std::uint8_t {
  NewMiss,    // caller issues exactly one backend page read
  Coalesced,  // request joined an in-flight fill, no new backend read
  Stall,      // MSHR full, caller retries when an entry frees
};

// Miss status holding registers: at most one entry per page, each
// holding the requests waiting on that page's fill in arrival order.
class Mshr {
 public:
  explicit Mshr(std::uint32_t capacity);

  // Called on a cache miss only.
  MshrResult register_miss(std::uint64_t page_number, std::uint32_t req_id);
  void mark_issued(std::uint64_t page_number);
  // Removes the entry and returns its waiters in arrival order. The
  // caller installs the page before replaying them.
  std::vector<std::uint32_t> complete(std::uint64_t page_number);

  bool contains(std::uint64_t page_number) const {
    return entries_.count(page_number) != 0;
  }
  bool full() const { return entries_.size() >= capacity_; }
  std::size_t size() const { return entries_.size(); }
  std::uint32_t capacity() const { return capacity_; }

 private:
  struct Entry {
    std::vector<std::uint32_t> targets;
    bool issued = false;
  };
  std::uint32_t capacity_;
  std::unordered_map<std::uint64_t, Entry> entries_;
};

}  // namespace cxlsim
