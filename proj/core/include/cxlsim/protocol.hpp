// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cxlsim/time.hpp"
#include "cxlsim/types.hpp"

namespace cxlsim {

// CPU-side request kinds. Plain loads and stores convert to CXL.mem
// flits; the cache-maintenance kinds only influence the coherence hint
// and are otherwise rejected by the bridge.
enum class RequestKind : std::uint8_t {
  Read,
  Write,
  InvalidateLine,
  FlushLine,            // flush without invalidate
  FlushInvalidateLine,  // flush and invalidate
};

inline constexpr RequestKind kAllRequestKinds[] = {
    RequestKind::Read, RequestKind::Write, RequestKind::InvalidateLine,
    RequestKind::FlushLine, RequestKind::FlushInvalidateLine};

// One 64B CPU-side memory request; the unit of workload traffic.
struct MemRequest {
  std::uint32_t id = 0;
  std::uint64_t addr = 0;  // 64-byte aligned
  std::uint32_t size = kCacheLineBytes;
  RequestKind kind = RequestKind::Read;
  SimTime issue_time{};
  std::optional<CacheLine> payload;  // present iff kind == Write

  bool is_write() const { return kind == RequestKind::Write; }
};

// The four CXL.mem transaction types carried by a flit. M2S types
// originate host-side, S2M types originate device-side.
enum class CxlTransactionType : std::uint8_t {
  M2SReq = 1,
  M2SRwD = 2,
  S2MDRS = 3,
  S2MNDR = 4,
};

bool is_m2s(CxlTransactionType txn);

// Coherence hint on M2S flits: what copy of the line the host keeps.
enum class MetaValue : std::uint8_t {
  Invalid = 1,
  Any = 2,
  Shared = 3,
};

// A CXL.mem transaction. The encoded header is exactly 64 bytes;
// payload-bearing types (M2SRwD, S2MDRS) are followed by a paired 64B
// data slot on the wire.
struct CxlFlit {
  CxlTransactionType txn = CxlTransactionType::M2SReq;
  std::uint64_t addr = 0;
  std::optional<MetaValue> meta;   // M2S only
  std::optional<CacheLine> data;   // M2SRwD and S2MDRS only
  std::uint64_t lba = 0;           // addr / 4096
  std::uint16_t nlb = 1;           // number of logical blocks, >= 1
  std::uint32_t req_id = 0;

  bool operator==(const CxlFlit&) const = default;
};

inline constexpr std::size_t kFlitHeaderBytes = 64;

// SSD-facing request distilled from a flit.
struct SsdRequest {
  AccessKind kind = AccessKind::Read;
  std::uint64_t lba = 0;
  std::uint32_t nlb = 1;

  bool operator==(const SsdRequest&) const = default;
};

// Where an address routes: host-local memory or a CXL device port.
struct RouteTarget {
  enum class Kind : std::uint8_t { LocalDram, CxlDevice };
  Kind kind = Kind::LocalDram;
  std::uint32_t device_id = 0;

  bool operator==(const RouteTarget&) const = default;

  static RouteTarget local() { return {Kind::LocalDram, 0}; }
  static RouteTarget cxl(std::uint32_t id) { return {Kind::CxlDevice, id}; }
};

// Ordered, disjoint physical address ranges. Lookups outside every range
// fault: there is no silent default target.
class AddressMap {
 public:
  void add_range(std::uint64_t base, std::uint64_t size, RouteTarget target);
  RouteTarget route(std::uint64_t addr) const;  // throws AddressFault
  bool contains(std::uint64_t addr) const;
  bool empty() const { return ranges_.empty(); }

 private:
  struct Range {
    std::uint64_t base;
    std::uint64_t size;
    RouteTarget target;
  };
  std::vector<Range> ranges_;  // sorted by base
};

// Coherence hint selection: requests that neither invalidate nor flush
// carry Any; invalidating kinds carry Invalid; a flush that leaves the
// line cached carries Shared. Total over all request kinds.
MetaValue meta_value_for(RequestKind kind);

// Host->device conversion. Read -> M2SReq, Write -> M2SRwD (payload
// attached). Any other kind is an unsupported command: the caller logs a
// warning and drops the request, so this returns nullopt.
std::optional<CxlFlit> to_flit(const MemRequest& req);

// Device->host response. M2SReq -> S2MDRS carrying data (required),
// M2SRwD -> S2MNDR. req_id and addr are preserved. Responding to an S2M
// flit, or omitting data for a read response, is a logic error.
CxlFlit to_response(const CxlFlit& flit, std::optional<CacheLine> data);

// Extracts the starting LBA and block count for the SSD backend.
SsdRequest flit_to_ssd_request(const CxlFlit& flit);

// Bit-exact wire codec. Header layout (little-endian fields):
//   byte  0      transaction type
//   byte  1      meta (0 = absent)
//   bytes 2-9    addr
//   bytes 10-17  lba
//   bytes 18-19  nlb
//   bytes 20-23  req_id
//   bytes 24-63  zero padding
// Payload-bearing flits append the 64B data slot after the header.
std::vector<std::uint8_t> serialize_flit(const CxlFlit& flit);
CxlFlit deserialize_flit(std::span<const std::uint8_t> bytes);

std::string to_string(RequestKind kind);
std::string to_string(CxlTransactionType txn);
std::string to_string(MetaValue meta);

}  // namespace cxlsim
