// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/replacement.hpp"

#include <limits>

#include "cxlsim/errors.hpp"

namespace cxlsim {

PolicyKind parse_policy(const std::string& name) {
  if (name == "direct") return PolicyKind::Direct;
  if (name == "lru") return PolicyKind::LRU;
  if (name == "fifo") return PolicyKind::FIFO;
  if (name == "2q") return PolicyKind::TwoQ;
  if (name == "lfru") return PolicyKind::LFRU;
  throw ConfigError("unknown policy '" + name +
                    "' (expected direct|lru|fifo|2q|lfru)");
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Direct: return "direct";
    case PolicyKind::LRU: return "lru";
    case PolicyKind::FIFO: return "fifo";
    case PolicyKind::TwoQ: return "2q";
    case PolicyKind::LFRU: return "lfru";
  }
  return "?";
}

namespace {

// Shared stamp storage: one slot per (set, way).
class StampedPolicy : public ReplacementPolicy {
 public:
  StampedPolicy(std::uint32_t num_sets, std::uint32_t ways)
      : ways_(ways), stamps_(std::size_t{num_sets} * ways, 0) {}

 protected:
  std::uint64_t bump() { return ++clock_; }
  std::uint64_t& stamp(std::uint32_t set, std::uint32_t way) {
    return stamps_[std::size_t{set} * ways_ + way];
  }
  const std::uint64_t& stamp(std::uint32_t set, std::uint32_t way) const {
    return stamps_[std::size_t{set} * ways_ + way];
  }

  std::uint32_t min_stamp_way(std::uint32_t set,
                              const std::vector<bool>& evictable) const {
    std::uint32_t best = ways_;
    std::uint64_t best_stamp = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t w = 0; w < ways_; ++w) {
      if (!evictable[w]) continue;
      if (stamp(set, w) < best_stamp) {
        best_stamp = stamp(set, w);
        best = w;
      }
    }
    if (best == ways_) throw SimLogicError("victim: no evictable way");
    return best;
  }

  std::uint32_t ways_;

 private:
  std::uint64_t clock_ = 0;
  std::vector<std::uint64_t> stamps_;
};

class DirectPolicy : public ReplacementPolicy {
 public:
  explicit DirectPolicy(std::uint32_t ways) {
    if (ways != 1) {
      throw ConfigError("direct mapping requires associativity 1");
    }
  }
  void on_install(std::uint32_t, std::uint32_t) override {}
  void on_touch(std::uint32_t, std::uint32_t) override {}
  std::uint32_t victim(std::uint32_t,
                       const std::vector<bool>& evictable) const override {
    if (!evictable[0]) throw SimLogicError("victim: no evictable way");
    return 0;
  }
};

class LruPolicy : public StampedPolicy {
 public:
  using StampedPolicy::StampedPolicy;
  void on_install(std::uint32_t set, std::uint32_t way) override {
    stamp(set, way) = bump();
  }
  void on_touch(std::uint32_t set, std::uint32_t way) override {
    stamp(set, way) = bump();
  }
  std::uint32_t victim(std::uint32_t set,
                       const std::vector<bool>& evictable) const override {
    return min_stamp_way(set, evictable);
  }
};

class FifoPolicy : public StampedPolicy {
 public:
  using StampedPolicy::StampedPolicy;
  void on_install(std::uint32_t set, std::uint32_t way) override {
    stamp(set, way) = bump();
  }
  void on_touch(std::uint32_t set, std::uint32_t way) override {
    bump();  // keep stamps aligned with the access count; order unchanged
  }
  std::uint32_t victim(std::uint32_t set,
                       const std::vector<bool>& evictable) const override {
    return min_stamp_way(set, evictable);
  }
};

// Simplified 2Q without the A1out ghost queue. A way's stamp is its A1in
// insertion order while in A1in (hits promote out, so it never changes
// there) and its recency once in Am.
class TwoQPolicy : public StampedPolicy {
 public:
  TwoQPolicy(std::uint32_t num_sets, std::uint32_t ways)
      : StampedPolicy(num_sets, ways),
        quota_(ways / 4 > 0 ? ways / 4 : 1),
        in_a1in_(std::size_t{num_sets} * ways, false) {}

  void on_install(std::uint32_t set, std::uint32_t way) override {
    stamp(set, way) = bump();
    a1in(set, way) = true;
  }
  void on_touch(std::uint32_t set, std::uint32_t way) override {
    stamp(set, way) = bump();
    a1in(set, way) = false;  // promote to Am on first reuse
  }
  std::uint32_t victim(std::uint32_t set,
                       const std::vector<bool>& evictable) const override {
    std::uint32_t a1_count = 0;
    bool has_am = false;
    for (std::uint32_t w = 0; w < ways_; ++w) {
      if (!evictable[w]) continue;
      if (a1in(set, w)) {
        ++a1_count;
      } else {
        has_am = true;
      }
    }
    const bool from_a1in = a1_count > quota_ || !has_am;
    std::uint32_t best = ways_;
    std::uint64_t best_stamp = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t w = 0; w < ways_; ++w) {
      if (!evictable[w] || a1in(set, w) != from_a1in) continue;
      if (stamp(set, w) < best_stamp) {
        best_stamp = stamp(set, w);
        best = w;
      }
    }
    if (best == ways_) throw SimLogicError("victim: no evictable way");
    return best;
  }

 private:
  std::vector<bool>::reference a1in(std::uint32_t set, std::uint32_t way) {
    return in_a1in_[std::size_t{set} * ways_ + way];
  }
  bool a1in(std::uint32_t set, std::uint32_t way) const {
    return in_a1in_[std::size_t{set} * ways_ + way];
  }

  std::uint32_t quota_;
  std::vector<bool> in_a1in_;
};

class LfruPolicy : public StampedPolicy {
 public:
  LfruPolicy(std::uint32_t num_sets, std::uint32_t ways,
             std::uint64_t aging_period)
      : StampedPolicy(num_sets, ways),
        aging_period_(aging_period),
        freq_(std::size_t{num_sets} * ways, 0),
        set_accesses_(num_sets, 0) {
    if (aging_period_ == 0) {
      throw ConfigError("lfru aging period must be positive");
    }
  }

  void note_access(std::uint32_t set) override {
    if (++set_accesses_[set] % aging_period_ == 0) {
      for (std::uint32_t w = 0; w < ways_; ++w) {
        frequency(set, w) /= 2;
      }
    }
  }
  void on_install(std::uint32_t set, std::uint32_t way) override {
    stamp(set, way) = bump();
    frequency(set, way) = 1;
  }
  void on_touch(std::uint32_t set, std::uint32_t way) override {
    stamp(set, way) = bump();
    ++frequency(set, way);
  }
  std::uint32_t victim(std::uint32_t set,
                       const std::vector<bool>& evictable) const override {
    std::uint32_t best = ways_;
    std::uint64_t best_freq = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t best_stamp = std::numeric_limits<std::uint64_t>::max();
    for (std::uint32_t w = 0; w < ways_; ++w) {
      if (!evictable[w]) continue;
      const std::uint64_t f = frequency(set, w);
      const std::uint64_t s = stamp(set, w);
      if (f < best_freq || (f == best_freq && s < best_stamp)) {
        best_freq = f;
        best_stamp = s;
        best = w;
      }
    }
    if (best == ways_) throw SimLogicError("victim: no evictable way");
    return best;
  }

 private:
  std::uint64_t& frequency(std::uint32_t set, std::uint32_t way) {
    return freq_[std::size_t{set} * ways_ + way];
  }
  std::uint64_t frequency(std::uint32_t set, std::uint32_t way) const {
    return freq_[std::size_t{set} * ways_ + way];
  }

  std::uint64_t aging_period_;
  std::vector<std::uint64_t> freq_;
  std::vector<std::uint64_t> set_accesses_;
};

}  // namespace

std::unique_ptr<ReplacementPolicy> ReplacementPolicy::create(
    PolicyKind kind, std::uint32_t num_sets, std::uint32_t ways,
    const PolicyParams& params) {
  switch (kind) {
    case PolicyKind::Direct:
      return std::make_unique<DirectPolicy>(ways);
    case PolicyKind::LRU:
      return std::make_unique<LruPolicy>(num_sets, ways);
    case PolicyKind::FIFO:
      return std::make_unique<FifoPolicy>(num_sets, ways);
    case PolicyKind::TwoQ:
      return std::make_unique<TwoQPolicy>(num_sets, ways);
    case PolicyKind::LFRU:
      return std::make_unique<LfruPolicy>(num_sets, ways,
                                          params.lfru_aging_period);
  }
  throw SimLogicError("unknown policy kind");
}

}  // namespace cxlsim
