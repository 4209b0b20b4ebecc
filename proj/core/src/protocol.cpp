// SPDX-License-Identifier: Apache-2.0
#include "cxlsim/protocol.hpp"

#include <algorithm>

#include "cxlsim/errors.hpp"

namespace cxlsim {

bool is_m2s(CxlTransactionType txn) {
  return txn == CxlTransactionType::M2SReq || txn == CxlTransactionType::M2SRwD;
}

void AddressMap::add_range(std::uint64_t base, std::uint64_t size,
                           RouteTarget target) {
  if (size == 0) throw ConfigError("address range must have nonzero size");
  const std::uint64_t end = base + size;
  if (end < base) throw ConfigError("address range wraps the address space");
  for (const Range& r : ranges_) {
    if (base < r.base + r.size && r.base < end) {
      throw ConfigError("address ranges must be disjoint");
    }
  }
  ranges_.push_back(Range{base, size, target});
  std::sort(ranges_.begin(), ranges_.end(),
            [](const Range& a, const Range& b) { return a.base < b.base; });
}

RouteTarget AddressMap::route(std::uint64_t addr) const {
  for (const Range& r : ranges_) {
    if (addr >= r.base && addr - r.base < r.size) return r.target;
  }
  throw AddressFault("unmapped physical address 0x" + [addr] {
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) buf[15 - i] = digits[(addr >> (i * 4)) & 0xF];
    buf[16] = '\0';
    return std::string(buf);
  }());
}

bool AddressMap::contains(std::uint64_t addr) const {
  for (const Range& r : ranges_) {
    if (addr >= r.base && addr - r.base < r.size) return true;
  }
  return false;
}

MetaValue meta_value_for(RequestKind kind) {
  switch (kind) {
    case RequestKind::Read:
    case RequestKind::Write:
      return MetaValue::Any;
    case RequestKind::InvalidateLine:
    case RequestKind::FlushInvalidateLine:
      return MetaValue::Invalid;
    case RequestKind::FlushLine:
      return MetaValue::Shared;
  }
  throw SimLogicError("meta_value_for: unknown request kind");
}

std::optional<CxlFlit> to_flit(const MemRequest& req) {
  if (req.addr % kCacheLineBytes != 0 || req.size != kCacheLineBytes) {
    throw SimLogicError("to_flit: request must be one aligned 64B line");
  }
  CxlFlit flit;
  switch (req.kind) {
    case RequestKind::Read:
      flit.txn = CxlTransactionType::M2SReq;
      break;
    case RequestKind::Write:
      if (!req.payload) {
        throw SimLogicError("to_flit: write request without payload");
      }
      flit.txn = CxlTransactionType::M2SRwD;
      flit.data = req.payload;
      break;
    default:
      return std::nullopt;  // UnsupportedCommand: warn and drop
  }
  flit.addr = req.addr;
  flit.meta = meta_value_for(req.kind);
  flit.lba = req.addr / kPageBytes;
  flit.nlb = 1;  // an aligned 64B request never spans pages
  flit.req_id = req.id;
  return flit;
}

CxlFlit to_response(const CxlFlit& flit, std::optional<CacheLine> data) {
  if (!is_m2s(flit.txn)) {
    throw SimLogicError("to_response: input flit is already a response");
  }
  CxlFlit resp;
  if (flit.txn == CxlTransactionType::M2SReq) {
    if (!data) {
      throw SimLogicError("to_response: read response requires data");
    }
    resp.txn = CxlTransactionType::S2MDRS;
    resp.data = data;
  } else {
    resp.txn = CxlTransactionType::S2MNDR;
  }
  resp.addr = flit.addr;
  resp.lba = flit.lba;
  resp.nlb = flit.nlb;
  resp.req_id = flit.req_id;
  return resp;
}

SsdRequest flit_to_ssd_request(const CxlFlit& flit) {
  SsdRequest req;
  req.kind = flit.txn == CxlTransactionType::M2SRwD ? AccessKind::Write
                                                    : AccessKind::Read;
  req.lba = flit.lba;
  req.nlb = flit.nlb;
  return req;
}

namespace {

void put_le(std::uint8_t* out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out[i] = static_cast<std::uint8_t>(value >> (8 * i));
  }
}

std::uint64_t get_le(const std::uint8_t* in, int bytes) {
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) {
    value |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  }
  return value;
}

bool carries_data(CxlTransactionType txn) {
  return txn == CxlTransactionType::M2SRwD || txn == CxlTransactionType::S2MDRS;
}

}  // namespace

std::vector<std::uint8_t> serialize_flit(const CxlFlit& flit) {
  if (is_m2s(flit.txn) != flit.meta.has_value()) {
    throw SimLogicError("serialize_flit: meta present iff flit is M2S");
  }
  if (carries_data(flit.txn) != flit.data.has_value()) {
    throw SimLogicError("serialize_flit: data present iff type carries data");
  }
  std::vector<std::uint8_t> out(kFlitHeaderBytes, 0);
  out[0] = static_cast<std::uint8_t>(flit.txn);
  out[1] = flit.meta ? static_cast<std::uint8_t>(*flit.meta) : 0;
  put_le(&out[2], flit.addr, 8);
  put_le(&out[10], flit.lba, 8);
  put_le(&out[18], flit.nlb, 2);
  put_le(&out[20], flit.req_id, 4);
  if (flit.data) {
    out.insert(out.end(), flit.data->begin(), flit.data->end());
  }
  return out;
}

CxlFlit deserialize_flit(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFlitHeaderBytes) {
    throw SimLogicError("deserialize_flit: short buffer");
  }
  const std::uint8_t txn_byte = bytes[0];
  if (txn_byte < 1 || txn_byte > 4) {
    throw SimLogicError("deserialize_flit: unknown transaction type");
  }
  CxlFlit flit;
  flit.txn = static_cast<CxlTransactionType>(txn_byte);

  const std::uint8_t meta_byte = bytes[1];
  if (is_m2s(flit.txn)) {
    if (meta_byte < 1 || meta_byte > 3) {
      throw SimLogicError("deserialize_flit: M2S flit requires a MetaValue");
    }
    flit.meta = static_cast<MetaValue>(meta_byte);
  } else if (meta_byte != 0) {
    throw SimLogicError("deserialize_flit: S2M flit carries no MetaValue");
  }

  flit.addr = get_le(&bytes[2], 8);
  flit.lba = get_le(&bytes[10], 8);
  flit.nlb = static_cast<std::uint16_t>(get_le(&bytes[18], 2));
  flit.req_id = static_cast<std::uint32_t>(get_le(&bytes[20], 4));
  for (std::size_t i = 24; i < kFlitHeaderBytes; ++i) {
    if (bytes[i] != 0) {
      throw SimLogicError("deserialize_flit: nonzero header padding");
    }
  }
  if (flit.nlb == 0) {
    throw SimLogicError("deserialize_flit: nlb must be >= 1");
  }
  if (flit.lba * kPageBytes > flit.addr ||
      flit.addr >= (flit.lba + flit.nlb) * kPageBytes) {
    throw SimLogicError("deserialize_flit: lba window does not cover addr");
  }

  const std::size_t expect =
      carries_data(flit.txn) ? kFlitHeaderBytes + kCacheLineBytes
                             : kFlitHeaderBytes;
  if (bytes.size() != expect) {
    throw SimLogicError("deserialize_flit: buffer size mismatch");
  }
  if (carries_data(flit.txn)) {
    CacheLine line;
    std::copy_n(bytes.begin() + kFlitHeaderBytes, kCacheLineBytes,
                line.begin());
    flit.data = line;
  }
  return flit;
}

std::string to_string(RequestKind kind) {
  switch (kind) {
    case RequestKind::Read: return "read";
    case RequestKind::Write: return "write";
    case RequestKind::InvalidateLine: return "invalidate";
    case RequestKind::FlushLine: return "flush";
    case RequestKind::FlushInvalidateLine: return "flush-invalidate";
  }
  return "?";
}

std::string to_string(CxlTransactionType txn) {
  switch (txn) {
    case CxlTransactionType::M2SReq: return "M2SReq";
    case CxlTransactionType::M2SRwD: return "M2SRwD";
    case CxlTransactionType::S2MDRS: return "S2MDRS";
    case CxlTransactionType::S2MNDR: return "S2MNDR";
  }
  return "?";
}

std::string to_string(MetaValue meta) {
  switch (meta) {
    case MetaValue::Invalid: return "invalid";
    case MetaValue::Any: return "any";
    case MetaValue::Shared: return "shared";
  }
  return "?";
}

}  // namespace cxlsim
