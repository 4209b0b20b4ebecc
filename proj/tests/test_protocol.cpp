// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "cxlsim/errors.hpp"
#include "cxlsim/protocol.hpp"

using namespace cxlsim;

namespace {

constexpr std::uint64_t kMiB = 1024 * 1024;
constexpr std::uint64_t kGiB = 1024 * kMiB;

AddressMap default_map() {
  AddressMap map;
  map.add_range(0, 512 * kMiB, RouteTarget::local());
  map.add_range(4 * kGiB, 16 * kGiB, RouteTarget::cxl(0));
  return map;
}

MemRequest make_read(std::uint64_t addr, std::uint32_t id = 1) {
  MemRequest req;
  req.id = id;
  req.addr = addr;
  req.kind = RequestKind::Read;
  return req;
}

MemRequest make_write(std::uint64_t addr, std::uint32_t id = 2) {
  MemRequest req;
  req.id = id;
  req.addr = addr;
  req.kind = RequestKind::Write;
  req.payload = CacheLine{};
  (*req.payload)[0] = 0xAB;
  return req;
}

}  // namespace

TEST_CASE("addresses route to the unique containing range") {
  const AddressMap map = default_map();
  CHECK(map.route(0x1000) == RouteTarget::local());
  CHECK(map.route(4 * kGiB) == RouteTarget::cxl(0));          // inclusive base
  CHECK(map.route(4 * kGiB + 16 * kGiB - 64) == RouteTarget::cxl(0));
  CHECK_THROWS_AS(map.route(4 * kGiB + 16 * kGiB), AddressFault);  // one past
  CHECK_THROWS_AS(map.route(600 * kMiB), AddressFault);  // hole between ranges
}

TEST_CASE("empty map faults and overlapping ranges are rejected") {
  AddressMap map;
  CHECK_THROWS_AS(map.route(0), AddressFault);
  map.add_range(0, 1024, RouteTarget::local());
  CHECK_THROWS_AS(map.add_range(512, 1024, RouteTarget::cxl(0)), ConfigError);
}

TEST_CASE("reads convert to M2SReq with the page LBA") {
  const std::uint64_t addr = 0x100001040;  // 64B-aligned
  const auto flit = to_flit(make_read(addr));
  REQUIRE(flit.has_value());
  CHECK(flit->txn == CxlTransactionType::M2SReq);
  CHECK(flit->addr == addr);
  CHECK(flit->lba == addr / 4096);
  CHECK(flit->nlb == 1);
  CHECK(flit->meta == MetaValue::Any);
  CHECK_FALSE(flit->data.has_value());
}

TEST_CASE("writes convert to M2SRwD carrying the payload") {
  const auto flit = to_flit(make_write(0x100001040));
  REQUIRE(flit.has_value());
  CHECK(flit->txn == CxlTransactionType::M2SRwD);
  REQUIRE(flit->data.has_value());
  CHECK((*flit->data)[0] == 0xAB);
}

TEST_CASE("other request kinds are unsupported commands") {
  MemRequest req = make_read(0x1000);
  req.kind = RequestKind::InvalidateLine;
  CHECK_FALSE(to_flit(req).has_value());
  req.kind = RequestKind::FlushLine;
  CHECK_FALSE(to_flit(req).has_value());
}

TEST_CASE("meta value follows the invalidate/flush rules") {
  CHECK(meta_value_for(RequestKind::Read) == MetaValue::Any);
  CHECK(meta_value_for(RequestKind::Write) == MetaValue::Any);
  CHECK(meta_value_for(RequestKind::InvalidateLine) == MetaValue::Invalid);
  CHECK(meta_value_for(RequestKind::FlushInvalidateLine) == MetaValue::Invalid);
  CHECK(meta_value_for(RequestKind::FlushLine) == MetaValue::Shared);
}

TEST_CASE("meta value is total over every request kind") {
  for (RequestKind kind : kAllRequestKinds) {
    const MetaValue meta = meta_value_for(kind);
    CHECK((meta == MetaValue::Invalid || meta == MetaValue::Any ||
           meta == MetaValue::Shared));
  }
}

TEST_CASE("M2SReq answers with S2MDRS carrying data") {
  const auto flit = to_flit(make_read(0x100000000, 77));
  CacheLine data{};
  data[5] = 9;
  const CxlFlit resp = to_response(*flit, data);
  CHECK(resp.txn == CxlTransactionType::S2MDRS);
  CHECK(resp.req_id == 77);
  CHECK(resp.addr == flit->addr);
  REQUIRE(resp.data.has_value());
  CHECK((*resp.data)[5] == 9);
}

TEST_CASE("M2SRwD answers with S2MNDR and no data") {
  const auto flit = to_flit(make_write(0x100000000, 78));
  const CxlFlit resp = to_response(*flit, std::nullopt);
  CHECK(resp.txn == CxlTransactionType::S2MNDR);
  CHECK(resp.req_id == 78);
  CHECK_FALSE(resp.data.has_value());
}

TEST_CASE("responding to a response or omitting read data is fatal") {
  const auto flit = to_flit(make_read(0x100000000));
  const CxlFlit resp = to_response(*flit, CacheLine{});
  CHECK_THROWS_AS(to_response(resp, CacheLine{}), SimLogicError);
  CHECK_THROWS_AS(to_response(*flit, std::nullopt), SimLogicError);
}

TEST_CASE("flits distill to SSD requests by field mapping") {
  const auto read_flit = to_flit(make_read(7 * 4096));
  CHECK(flit_to_ssd_request(*read_flit) ==
        SsdRequest{AccessKind::Read, 7, 1});
  const auto write_flit = to_flit(make_write(0));
  CHECK(flit_to_ssd_request(*write_flit) ==
        SsdRequest{AccessKind::Write, 0, 1});
}

TEST_CASE("identical flits produce identical SSD requests") {
  // Without an MSHR in front, two overlapping reads of one page both
  // reach the backend.
  const auto a = to_flit(make_read(7 * 4096, 1));
  const auto b = to_flit(make_read(7 * 4096 + 64, 2));
  CHECK(flit_to_ssd_request(*a) == flit_to_ssd_request(*b));
}

TEST_CASE("round trip preserves req_id and addr for reads and writes") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t addr = (rng() % (1ULL << 40)) / 64 * 64;
    const std::uint32_t id = static_cast<std::uint32_t>(rng());
    const MemRequest req = rng() % 2 ? make_read(addr, id)
                                     : make_write(addr, id);
    const auto flit = to_flit(req);
    REQUIRE(flit.has_value());
    const CxlFlit resp = to_response(
        *flit, flit->txn == CxlTransactionType::M2SReq
                   ? std::optional<CacheLine>(CacheLine{})
                   : std::nullopt);
    CHECK(resp.req_id == req.id);
    CHECK(resp.addr == req.addr);
  }
}

TEST_CASE("flit header is exactly 64 bytes and the codec round-trips") {
  std::mt19937_64 rng(42);
  const CxlTransactionType txns[] = {
      CxlTransactionType::M2SReq, CxlTransactionType::M2SRwD,
      CxlTransactionType::S2MDRS, CxlTransactionType::S2MNDR};
  const MetaValue metas[] = {MetaValue::Invalid, MetaValue::Any,
                             MetaValue::Shared};
  int cases = 0;
  for (int i = 0; i < 1000; ++i) {
    for (CxlTransactionType txn : txns) {
      for (MetaValue meta : metas) {
        CxlFlit flit;
        flit.txn = txn;
        flit.addr = (rng() % (1ULL << 48)) / 64 * 64;
        flit.lba = flit.addr / 4096;
        flit.nlb = 1;
        flit.req_id = static_cast<std::uint32_t>(rng());
        if (is_m2s(txn)) flit.meta = meta;  // meta absent on S2M
        if (txn == CxlTransactionType::M2SRwD ||
            txn == CxlTransactionType::S2MDRS) {
          CacheLine data;
          for (auto& b : data) b = static_cast<std::uint8_t>(rng());
          flit.data = data;
        }
        const auto wire = serialize_flit(flit);
        const bool has_data = flit.data.has_value();
        CHECK(wire.size() == (has_data ? 128 : 64));
        const CxlFlit back = deserialize_flit(wire);
        CHECK(back == flit);
        ++cases;
      }
    }
  }
  CHECK(cases == 12000);
}

TEST_CASE("the wire layout is pinned byte for byte") {
  CxlFlit flit;
  flit.txn = CxlTransactionType::M2SReq;
  flit.addr = 0x0102030405060;  // 64B aligned
  flit.lba = flit.addr / 4096;
  flit.nlb = 1;
  flit.req_id = 0xA1B2C3D4;
  flit.meta = MetaValue::Shared;
  const auto wire = serialize_flit(flit);
  REQUIRE(wire.size() == kFlitHeaderBytes);
  CHECK(wire[0] == 1);  // M2SReq
  CHECK(wire[1] == 3);  // Shared
  CHECK(wire[2] == 0x60);
  CHECK(wire[3] == 0x50);  // addr little-endian
  CHECK(wire[10] == (flit.lba & 0xFF));
  CHECK(wire[18] == 1);
  CHECK(wire[19] == 0);
  CHECK(wire[20] == 0xD4);
  CHECK(wire[23] == 0xA1);
  for (std::size_t i = 24; i < 64; ++i) CHECK(wire[i] == 0);
}

TEST_CASE("the codec rejects malformed buffers") {
  CHECK_THROWS_AS(deserialize_flit(std::vector<std::uint8_t>(10)),
                  SimLogicError);
  std::vector<std::uint8_t> junk(64, 0);
  junk[0] = 9;  // no such transaction type
  CHECK_THROWS_AS(deserialize_flit(junk), SimLogicError);
  const auto wire = serialize_flit(*to_flit(make_read(0x1000)));
  auto padded = wire;
  padded[40] = 1;  // nonzero padding
  CHECK_THROWS_AS(deserialize_flit(padded), SimLogicError);
  auto truncated = serialize_flit(*to_flit(make_write(0x1000)));
  truncated.resize(64);  // data-bearing flit without its data slot
  CHECK_THROWS_AS(deserialize_flit(truncated), SimLogicError);
}
