// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace cxlsim {

inline constexpr std::uint32_t kCacheLineBytes = 64;
inline constexpr std::uint32_t kPageBytes = 4096;
inline constexpr std::uint32_t kLinesPerPage = kPageBytes / kCacheLineBytes;

using CacheLine = std::array<std::uint8_t, kCacheLineBytes>;

enum class AccessKind : std::uint8_t { Read, Write };

// Cache = 64B request granularity, Backend = 4KB SSD page granularity.
enum class AccessLevel : std::uint8_t { Cache, Backend };

}  // namespace cxlsim
