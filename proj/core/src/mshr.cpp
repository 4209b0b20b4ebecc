// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/mshr.hpp"

#include <algorithm>
#include <string>

#include "cxlsim/errors.hpp"

namespace cxlsim {

Mshr::Mshr(std::uint32_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("MSHR capacity must be >= 1");
}

MshrResult Mshr::register_miss(std::uint64_t page_number,
                               std::uint32_t req_id) {
  auto it = entries_.find(page_number);
  if (it != entries_.end()) {
    Entry& entry = it->second;
    if (std::find(entry.targets.begin(), entry.targets.end(), req_id) !=
        entry.targets.end()) {
      throw SimLogicError("MSHR: duplicate request id " +
                          std::to_string(req_id) + " for page " +
                          std::to_string(page_number));
    }
    entry.targets.push_back(req_id);
    return MshrResult::Coalesced;
  }
  if (entries_.size() >= capacity_) return MshrResult::Stall;
  entries_.emplace(page_number, Entry{{req_id}, false});
  return MshrResult::NewMiss;
}

void Mshr::mark_issued(std::uint64_t page_number) {
  auto it = entries_.find(page_number);
  if (it == entries_.end()) {
    throw SimLogicError("MSHR: mark_issued on absent entry");
  }
  it->second.issued = true;
}

std::vector<std::uint32_t> Mshr::complete(std::uint64_t page_number) {
  auto it = entries_.find(page_number);
  if (it == entries_.end()) {
    throw SimLogicError("MSHR: completing page " +
                        std::to_string(page_number) + " with no entry");
  }
  if (!it->second.issued) {
    throw SimLogicError("MSHR: completing page whose fill was never issued");
  }
  std::vector<std::uint32_t> targets = std::move(it->second.targets);
  entries_.erase(it);
  return targets;
}

}  // namespace cxlsim
