// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/runner.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <iostream>
#include <memory>
#include <unordered_map>

#include "cxlsim/cache.hpp"
#include "cxlsim/devices.hpp"
#include "cxlsim/errors.hpp"
#include "cxlsim/event_queue.hpp"
#include "cxlsim/mshr.hpp"
#include "cxlsim/protocol.hpp"

namespace cxlsim {

namespace {

using Page = std::array<std::uint8_t, kPageBytes>;

// Sparse backing store for SSD page contents; untouched pages read as
// zeros.
class PageStore {
 public:
  Page& page(std::uint64_t page_number) {
    auto it = pages_.find(page_number);
    if (it == pages_.end()) {
      it = pages_.emplace(page_number, std::make_unique<Page>()).first;
      it->second->fill(0);
    }
    return *it->second;
  }

 private:
  std::unordered_map<std::uint64_t, std::unique_ptr<Page>> pages_;
};

// One run: trace replay with a bounded issue window in front of the
// selected device model. All state is owned here; two machines never
// share anything, so sweep runs are trivially independent.
class SimMachine {
 public:
  SimMachine(const RunConfig& cfg, const RequestTrace& trace,
             const ReadDataCallback& on_read)
      : cfg_(cfg),
        trace_(trace),
        on_read_(on_read),
        engine_(cfg.max_events),
        params_(latency_params_from(cfg)) {
    map_.add_range(0, cfg_.local_memory_bytes, RouteTarget::local());
    map_.add_range(cfg_.cxl_window_base, cfg_.ssd.capacity_bytes,
                   is_cxl_device(cfg_.device) ? RouteTarget::cxl(0)
                                              : RouteTarget::local());
    if (is_ssd_device(cfg_.device)) {
      ssd_.emplace(cfg_.ssd);
    }
    if (cfg_.device == DeviceKind::CxlSsdCached) {
      CacheGeometry geometry{cfg_.cache_capacity_bytes, kPageBytes,
                             cfg_.cache_ways};
      PolicyParams params{cfg_.lfru_aging_period};
      cache_.emplace(geometry, *cfg_.policy, params);
      mshr_.emplace(cfg_.mshr_entries);
      frames_.resize(cache_->geometry().frames());
    }
    start_ticks_.resize(trace_.ops.size(), 0);
    completed_.resize(trace_.ops.size(), false);
  }

  RunResult finish() {
    engine_.schedule(SimTime{0}, [this] { try_issue(); });
    engine_.run_until_idle();

    if (next_ != trace_.ops.size() || outstanding_ != 0) {
      throw SimLogicError("replay ended with requests still outstanding");
    }

    // Drain: write back every dirty page so the amplification accounting
    // closes; the simulated clock covers the drain.
    if (cache_) {
      for (std::uint64_t page : cache_->flush_all()) {
        write_frame_to_store(page);
        ssd_->page_op(engine_.now(), AccessKind::Write, device_lba(page));
        stats_.record_access(SimTime::from_ns(cfg_.ssd.page_program_ns),
                             kPageBytes, AccessKind::Write,
                             AccessLevel::Backend);
        stats_.record_flush_writeback();
      }
    }

    SimTime end = engine_.now();
    if (ssd_) end = std::max(end, ssd_->last_completion());

    StatsReport report = stats_.summarize(end);
    report.cache_present = cache_.has_value();
    report.ssd_present = ssd_.has_value();
    report.cxl_link = is_cxl_device(cfg_.device);
    report.meta_any = meta_any_;
    report.meta_invalid = meta_invalid_;
    report.meta_shared = meta_shared_;
    report.kv_ops = trace_.logical_ops;
    report.events_dispatched = engine_.dispatched();

    RunResult result;
    result.config = cfg_;
    result.stats = report;
    result.latency_samples_ticks = stats_.take_samples();
    result.max_outstanding_observed = max_outstanding_observed_;
    return result;
  }

 private:
  // ---- issue window ----

  void try_issue() {
    while (next_ < trace_.ops.size() && outstanding_ < cfg_.max_outstanding) {
      const TraceOp& op = trace_.ops[next_];
      if (op.depends_on_prev && next_ > 0 && !completed_[next_ - 1]) return;
      if (op.req.issue_time > engine_.now()) {
        if (!issue_event_pending_) {
          issue_event_pending_ = true;
          engine_.schedule(op.req.issue_time, [this] {
            issue_event_pending_ = false;
            try_issue();
          });
        }
        return;
      }
      start_request(next_++);
    }
  }

  void start_request(std::size_t idx) {
    const MemRequest& req = trace_.ops[idx].req;
    ++outstanding_;
    max_outstanding_observed_ =
        std::max(max_outstanding_observed_, outstanding_);
    start_ticks_[idx] = engine_.now().ticks;

    const RouteTarget target = map_.route(req.addr);
    if (target.kind == RouteTarget::Kind::LocalDram) {
      start_local(idx, req);
    } else {
      start_cxl(idx, req);
    }
  }

  // Local bus devices: fixed service latency, no flit conversion.
  void start_local(std::size_t idx, const MemRequest& req) {
    if (req.kind != RequestKind::Read && req.kind != RequestKind::Write) {
      drop_unsupported(idx, req);
      return;
    }
    const AccessKind kind = req.is_write() ? AccessKind::Write
                                           : AccessKind::Read;
    const DeviceTiming& timing =
        cfg_.device == DeviceKind::Pmem ? cfg_.pmem : cfg_.dram;
    const std::uint64_t service_ns = kind == AccessKind::Read
                                         ? timing.read_ns
                                         : timing.write_ns;
    engine_.schedule_in(SimTime::from_ns(service_ns),
                        [this, idx] { complete(idx); });
  }

  // CXL devices: Home Agent conversion (one port latency), device-side
  // decode (another port latency), then the backend path.
  void start_cxl(std::size_t idx, const MemRequest& req) {
    auto flit = to_flit(req);
    if (!flit) {
      drop_unsupported(idx, req);
      return;
    }
    switch (*flit->meta) {
      case MetaValue::Any: ++meta_any_; break;
      case MetaValue::Invalid: ++meta_invalid_; break;
      case MetaValue::Shared: ++meta_shared_; break;
    }
    const SimTime arrive =
        engine_.now() + SimTime::from_ns(params_.cxl_total_ns());
    engine_.schedule(arrive, [this, idx, flit = *flit] {
      device_decode(idx, flit);
    });
  }

  void device_decode(std::size_t idx, const CxlFlit& flit) {
    switch (cfg_.device) {
      case DeviceKind::CxlDram: {
        const AccessKind kind = flit.txn == CxlTransactionType::M2SRwD
                                    ? AccessKind::Write
                                    : AccessKind::Read;
        const std::uint64_t service_ns = dram_access_ns(cfg_.dram, kind);
        engine_.schedule_in(SimTime::from_ns(service_ns), [this, idx, flit] {
          respond(idx, flit);
        });
        break;
      }
      case DeviceKind::CxlSsd:
        ssd_direct(idx, flit);
        break;
      case DeviceKind::CxlSsdCached:
        cache_probe(idx, flit);
        break;
      default:
        throw SimLogicError("CXL flit routed to a local device");
    }
  }

  // Uncached SSD path: every 64B request becomes a full-page operation.
  void ssd_direct(std::size_t idx, const CxlFlit& flit) {
    const SsdRequest sreq = flit_to_ssd_request(flit);
    const std::uint64_t page = sreq.lba;  // global page number
    const AccessKind kind = sreq.kind;
    if (kind == AccessKind::Write) {
      merge_line_into_store(page, flit.addr, *flit.data);
    }
    const SimTime done = ssd_op(kind, page);
    engine_.schedule(done, [this, idx, flit] { respond(idx, flit); });
  }

  // Cached device: probe after the decode latency already charged.
  void cache_probe(std::size_t idx, const CxlFlit& flit) {
    const std::uint64_t page = flit.addr / kPageBytes;
    const AccessKind kind = flit.txn == CxlTransactionType::M2SRwD
                                ? AccessKind::Write
                                : AccessKind::Read;
    if (cache_->probe_touch(page, kind)) {
      stats_.record_cache_hit();
      if (kind == AccessKind::Write) {
        merge_line_into_frame(page, flit.addr, *flit.data);
      }
      engine_.schedule_in(SimTime::from_ns(cfg_.cache_hit_ns),
                          [this, idx, flit] { respond(idx, flit); });
      return;
    }
    resolve_miss(idx, flit, page, kind);
  }

  void resolve_miss(std::size_t idx, const CxlFlit& flit, std::uint64_t page,
                    AccessKind kind) {
    if (mshr_->contains(page)) {
      stats_.record_cache_miss();
      mshr_->register_miss(page, flit.req_id);  // Coalesced
      waiters_[page].push_back(idx);
      return;
    }
    if (mshr_->full()) {
      stalled_.push_back(idx);
      return;
    }
    auto reservation = cache_->reserve_for_fill(page);
    if (!reservation) {
      stalled_.push_back(idx);  // every way of the set is filling
      return;
    }
    stats_.record_cache_miss();
    mshr_->register_miss(page, flit.req_id);  // NewMiss
    waiters_[page].push_back(idx);

    if (reservation->victim) {
      // Victim data leaves the frame now; a dirty victim's program is
      // issued to the SSD queue ahead of the fill read.
      if (reservation->victim->dirty) {
        store_page(reservation->victim->page_number) =
            frames_[reservation->frame];
        ssd_op(AccessKind::Write, reservation->victim->page_number);
        stats_.record_dirty_writeback();
      }
    }
    const SimTime fill_done = ssd_op(AccessKind::Read, page);
    mshr_->mark_issued(page);
    engine_.schedule(fill_done, [this, page] { fill_complete(page); });
  }

  void fill_complete(std::uint64_t page) {
    const auto frame = cache_->frame_of(page);
    if (!frame) throw SimLogicError("fill completed without a reservation");
    frames_[*frame] = store_page(page);
    cache_->install(page);

    const std::vector<std::uint32_t> ids = mshr_->complete(page);
    auto waiting = waiters_.find(page);
    if (waiting == waiters_.end() || waiting->second.size() != ids.size()) {
      throw SimLogicError("MSHR waiter bookkeeping out of sync");
    }
    // Replay in arrival order. The first waiter's access is subsumed by
    // the install; later waiters are genuine extra touches.
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t idx = waiting->second[i];
      const TraceOp& op = trace_.ops[idx];
      if (i > 0) cache_->touch(page);
      if (op.req.is_write()) {
        merge_line_into_frame(page, op.req.addr, *op.req.payload);
        cache_->mark_dirty(page);
      }
      CxlFlit flit = *to_flit(op.req);
      engine_.schedule_in(SimTime::from_ns(cfg_.cache_hit_ns),
                          [this, idx, flit] { respond(idx, flit); });
    }
    waiters_.erase(waiting);
    retry_stalled();
  }

  void retry_stalled() {
    if (stalled_.empty()) return;
    std::deque<std::size_t> pending;
    pending.swap(stalled_);
    for (std::size_t idx : pending) {
      // Re-probe from scratch; the page may have landed meanwhile.
      CxlFlit flit = *to_flit(trace_.ops[idx].req);
      cache_probe(idx, flit);
    }
  }

  // ---- completion ----

  void respond(std::size_t idx, const CxlFlit& flit) {
    // Device-side format conversion back to an S2M response.
    if (is_m2s(flit.txn)) {
      std::optional<CacheLine> data;
      if (flit.txn == CxlTransactionType::M2SReq) {
        data = read_line(flit.addr);
      }
      const CxlFlit resp = to_response(flit, data);
      if (resp.req_id != flit.req_id) {
        throw SimLogicError("response correlation id mismatch");
      }
      if (on_read_ && resp.data) on_read_(resp.req_id, *resp.data);
    }
    complete(idx);
  }

  void complete(std::size_t idx) {
    const MemRequest& req = trace_.ops[idx].req;
    const SimTime latency{engine_.now().ticks - start_ticks_[idx]};
    stats_.record_access(latency, req.size,
                         req.is_write() ? AccessKind::Write : AccessKind::Read,
                         AccessLevel::Cache);
    finish_request(idx);
  }

  void drop_unsupported(std::size_t idx, const MemRequest& req) {
    stats_.record_dropped();
    if (!warned_unsupported_) {
      std::cerr << "warning: unsupported command " << to_string(req.kind)
                << " dropped (id " << req.id << ")\n";
      warned_unsupported_ = true;
    }
    finish_request(idx);
  }

  void finish_request(std::size_t idx) {
    completed_[idx] = true;
    --outstanding_;
    try_issue();
  }

  // ---- data plumbing ----

  Page& store_page(std::uint64_t page) { return store_.page(page); }

  void merge_line_into_store(std::uint64_t page, std::uint64_t addr,
                             const CacheLine& data) {
    Page& p = store_page(page);
    std::memcpy(p.data() + addr % kPageBytes, data.data(), kCacheLineBytes);
  }

  void merge_line_into_frame(std::uint64_t page, std::uint64_t addr,
                             const CacheLine& data) {
    const auto frame = cache_->frame_of(page);
    if (!frame) throw SimLogicError("write merge on a non-resident page");
    std::memcpy(frames_[*frame].data() + addr % kPageBytes, data.data(),
                kCacheLineBytes);
  }

  void write_frame_to_store(std::uint64_t page) {
    const auto frame = cache_->frame_of(page);
    if (!frame) throw SimLogicError("flush of a non-resident page");
    store_page(page) = frames_[*frame];
  }

  CacheLine read_line(std::uint64_t addr) {
    const std::uint64_t page = addr / kPageBytes;
    CacheLine line{};
    const std::uint8_t* src = nullptr;
    if (cache_) {
      if (const auto frame = cache_->frame_of(page);
          frame && cache_->resident(page)) {
        src = frames_[*frame].data();
      }
    }
    if (src == nullptr && ssd_) src = store_page(page).data();
    if (src != nullptr) {
      std::memcpy(line.data(), src + addr % kPageBytes, kCacheLineBytes);
    }
    return line;  // non-SSD devices carry no data model: zeros
  }

  // Issues one page operation at the current time; lba is rebased onto
  // the device window before the bounds check.
  SimTime ssd_op(AccessKind kind, std::uint64_t page) {
    const SimTime done = ssd_->page_op(engine_.now(), kind, device_lba(page));
    stats_.record_access(
        SimTime::from_ns(kind == AccessKind::Read ? cfg_.ssd.page_read_ns
                                                  : cfg_.ssd.page_program_ns),
        kPageBytes, kind, AccessLevel::Backend);
    return done;
  }

  std::uint64_t device_lba(std::uint64_t page) const {
    const std::uint64_t window_first_page = cfg_.cxl_window_base / kPageBytes;
    if (page < window_first_page) {
      throw AddressFault("page below the device window");
    }
    return page - window_first_page;
  }

  const RunConfig& cfg_;
  const RequestTrace& trace_;
  const ReadDataCallback& on_read_;

  Engine engine_;
  StatsAccumulator stats_;
  AddressMap map_;
  DeviceLatencyParams params_;

  std::optional<DramPageCache> cache_;
  std::optional<Mshr> mshr_;
  std::vector<Page> frames_;
  std::optional<SsdQueueModel> ssd_;
  PageStore store_;

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> waiters_;
  std::deque<std::size_t> stalled_;
  std::vector<std::uint64_t> start_ticks_;
  std::vector<bool> completed_;
  std::size_t next_ = 0;
  std::uint32_t outstanding_ = 0;
  std::uint32_t max_outstanding_observed_ = 0;
  bool issue_event_pending_ = false;
  bool warned_unsupported_ = false;

  std::uint64_t meta_any_ = 0, meta_invalid_ = 0, meta_shared_ = 0;
};

void check_trace_fits(const RunConfig& cfg, const RequestTrace& trace) {
  if (trace.span_bytes > cfg.ssd.capacity_bytes) {
    throw ConfigError("workload footprint exceeds the device window");
  }
}

}  // namespace

RunResult run(const RunConfig& config) {
  validate(config);
  const RequestTrace trace = generate(workload_spec_from(config));
  return run_trace(config, trace);
}

RunResult run_trace(const RunConfig& config, const RequestTrace& trace,
                    const ReadDataCallback& on_read) {
  validate(config);
  check_trace_fits(config, trace);
  SimMachine machine(config, trace, on_read);
  return machine.finish();
}

std::vector<std::string> default_sweep_values(const std::string& axis) {
  if (axis == "device") {
    return {"dram", "cxl-dram", "pmem", "cxl-ssd", "cxl-ssd-cached"};
  }
  if (axis == "policy") {
    return {"direct", "lru", "fifo", "2q", "lfru"};
  }
  throw ConfigError("sweep axis must be 'device' or 'policy'");
}

SweepOutcome run_sweep(const RunConfig& base) {
  validate(base);
  if (base.sweep.empty()) {
    throw ConfigError("run_sweep requires a sweep axis");
  }
  if (base.sweep == "policy" && base.device != DeviceKind::CxlSsdCached) {
    throw ConfigError("policy sweep requires device 'cxl-ssd-cached'");
  }
  SweepOutcome outcome;
  outcome.values = base.sweep_values.empty()
                       ? default_sweep_values(base.sweep)
                       : base.sweep_values;
  if (outcome.values.empty()) {
    throw ConfigError("sweep value list must not be empty");
  }

  // One shared trace: identical traffic replayed against every value.
  const RequestTrace trace = generate(workload_spec_from(base));

  for (const std::string& value : outcome.values) {
    RunConfig cfg = base;
    cfg.sweep.clear();
    cfg.sweep_values.clear();
    try {
      if (base.sweep == "device") {
        cfg.device = parse_device(value);
        if (cfg.device == DeviceKind::CxlSsdCached) {
          if (!cfg.policy) cfg.policy = PolicyKind::LRU;
        } else {
          cfg.policy.reset();
        }
      } else {
        cfg.policy = parse_policy(value);
      }
      outcome.results.push_back(run_trace(cfg, trace));
    } catch (const SimError& e) {
      outcome.error = e.what();
      outcome.failed_value = value;
      break;
    }
  }
  return outcome;
}

}  // namespace cxlsim
