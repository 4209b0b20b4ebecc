// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/cache.hpp"

#include <bit>
#include <string>

#include "cxlsim/errors.hpp"

namespace cxlsim {

void CacheGeometry::validate() const {
  if (page_size != kPageBytes) {
    throw ConfigError("cache page size must be 4096 bytes");
  }
  if (ways == 0) throw ConfigError("cache associativity must be >= 1");
  const std::uint64_t row = std::uint64_t{page_size} * ways;
  if (capacity_bytes == 0 || capacity_bytes % row != 0) {
    throw ConfigError(
        "cache capacity must be a positive multiple of page_size * ways");
  }
  const std::uint64_t sets = capacity_bytes / row;
  if (!std::has_single_bit(sets)) {
    throw ConfigError("cache set count must be a power of two (got " +
                      std::to_string(sets) + ")");
  }
}

DramPageCache::DramPageCache(const CacheGeometry& geometry, PolicyKind policy,
                             const PolicyParams& params)
    : geometry_(geometry), policy_kind_(policy) {
  if (policy == PolicyKind::Direct) geometry_.ways = 1;
  geometry_.validate();
  num_sets_ = geometry_.num_sets();
  policy_ = ReplacementPolicy::create(policy, num_sets_, geometry_.ways, params);
  ways_.resize(std::size_t{num_sets_} * geometry_.ways);
}

DramPageCache::Way* DramPageCache::find(std::uint64_t page_number,
                                        WayState state) {
  const std::uint32_t set = set_of(page_number);
  for (std::uint32_t w = 0; w < geometry_.ways; ++w) {
    Way& way = way_at(set, w);
    if (way.state == state && way.page == page_number) return &way;
  }
  return nullptr;
}

const DramPageCache::Way* DramPageCache::find(std::uint64_t page_number,
                                              WayState state) const {
  return const_cast<DramPageCache*>(this)->find(page_number, state);
}

AccessOutcome DramPageCache::access(std::uint64_t addr, AccessKind kind) {
  return access_page(addr / kPageBytes, kind);
}

AccessOutcome DramPageCache::access_page(std::uint64_t page_number,
                                         AccessKind kind) {
  if (probe_touch(page_number, kind)) {
    return AccessOutcome{true, std::nullopt};
  }
  auto reservation = reserve_for_fill(page_number);
  if (!reservation) {
    throw SimLogicError("access: no way available in synchronous path");
  }
  install(page_number);
  if (kind == AccessKind::Write) mark_dirty(page_number);
  return AccessOutcome{false, reservation->victim};
}

bool DramPageCache::probe_touch(std::uint64_t page_number, AccessKind kind) {
  const std::uint32_t set = set_of(page_number);
  policy_->note_access(set);
  for (std::uint32_t w = 0; w < geometry_.ways; ++w) {
    Way& way = way_at(set, w);
    if (way.state == WayState::Valid && way.page == page_number) {
      policy_->on_touch(set, w);
      if (kind == AccessKind::Write) way.dirty = true;
      return true;
    }
  }
  return false;
}

std::optional<DramPageCache::Reservation> DramPageCache::reserve_for_fill(
    std::uint64_t page_number) {
  const std::uint32_t set = set_of(page_number);

  // Free ways are consumed before anything is evicted.
  for (std::uint32_t w = 0; w < geometry_.ways; ++w) {
    Way& way = way_at(set, w);
    if (way.state == WayState::Free) {
      way.state = WayState::Pending;
      way.page = page_number;
      way.dirty = false;
      return Reservation{set * geometry_.ways + w, std::nullopt};
    }
  }

  std::vector<bool> evictable(geometry_.ways);
  bool any = false;
  for (std::uint32_t w = 0; w < geometry_.ways; ++w) {
    evictable[w] = way_at(set, w).state == WayState::Valid;
    any = any || evictable[w];
  }
  if (!any) return std::nullopt;  // whole set is filling

  const std::uint32_t w = policy_->victim(set, evictable);
  Way& way = way_at(set, w);
  VictimPage victim{way.page, way.dirty};
  way.state = WayState::Pending;
  way.page = page_number;
  way.dirty = false;
  return Reservation{set * geometry_.ways + w, victim};
}

void DramPageCache::install(std::uint64_t page_number) {
  Way* way = find(page_number, WayState::Pending);
  if (way == nullptr) {
    throw SimLogicError("install: page has no pending reservation");
  }
  way->state = WayState::Valid;
  policy_->on_install(set_of(page_number),
                      static_cast<std::uint32_t>(way - &way_at(set_of(page_number), 0)));
}

void DramPageCache::mark_dirty(std::uint64_t page_number) {
  Way* way = find(page_number, WayState::Valid);
  if (way == nullptr) throw SimLogicError("mark_dirty: page not resident");
  way->dirty = true;
}

void DramPageCache::touch(std::uint64_t page_number) {
  const std::uint32_t set = set_of(page_number);
  for (std::uint32_t w = 0; w < geometry_.ways; ++w) {
    if (way_at(set, w).state == WayState::Valid &&
        way_at(set, w).page == page_number) {
      policy_->on_touch(set, w);
      return;
    }
  }
  throw SimLogicError("touch: page not resident");
}

std::vector<std::uint64_t> DramPageCache::flush_all() {
  std::vector<std::uint64_t> flushed;
  for (Way& way : ways_) {
    if (way.state == WayState::Valid && way.dirty) {
      flushed.push_back(way.page);
      way.dirty = false;
    }
  }
  return flushed;
}

bool DramPageCache::resident(std::uint64_t page_number) const {
  return find(page_number, WayState::Valid) != nullptr;
}

bool DramPageCache::dirty_page(std::uint64_t page_number) const {
  const Way* way = find(page_number, WayState::Valid);
  return way != nullptr && way->dirty;
}

std::optional<std::uint32_t> DramPageCache::frame_of(
    std::uint64_t page_number) const {
  const std::uint32_t set = set_of(page_number);
  for (std::uint32_t w = 0; w < geometry_.ways; ++w) {
    const Way& way = way_at(set, w);
    if (way.state != WayState::Free && way.page == page_number) {
      return set * geometry_.ways + w;
    }
  }
  return std::nullopt;
}

}  // namespace cxlsim
