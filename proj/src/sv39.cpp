// Copyright 2026 The tlbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tlbsim/sv39.hpp"

#include <cstdio>
#include <cstring>
#include <string>

#include "tlbsim/error.hpp"

namespace tlbsim {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Canonicality: return "CanonicalityError";
    case ErrorCode::Alignment: return "AlignmentError";
    case ErrorCode::PageFault: return "PageFault";
    case ErrorCode::MappingConflict: return "MappingConflict";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::UndefinedMetric: return "UndefinedMetric";
    case ErrorCode::InternalConsistency: return "InternalConsistencyError";
    case ErrorCode::Io: return "IoError";
  }
  return "Error";
}

const char* page_size_name(PageSize size) noexcept {
  switch (size) {
    case PageSize::Base4K: return "4K";
    case PageSize::Mega2M: return "2M";
    case PageSize::Giga1G: return "1G";
  }
  return "?";
}

std::optional<PageSize> parse_page_size(const char* text) noexcept {
  if (text == nullptr) return std::nullopt;
  if (!std::strcmp(text, "4K") || !std::strcmp(text, "4KB")) return PageSize::Base4K;
  if (!std::strcmp(text, "2M") || !std::strcmp(text, "2MB")) return PageSize::Mega2M;
  if (!std::strcmp(text, "1G") || !std::strcmp(text, "1GB")) return PageSize::Giga1G;
  return std::nullopt;
}

namespace {
enum PteBit : unsigned { kV = 0, kR, kW, kX, kU, kG, kA, kD };
constexpr unsigned kPpnShift = 10;
}  // namespace

std::uint64_t Pte::encode() const noexcept {
  std::uint64_t raw = (ppn & sv39::kPpnMask) << kPpnShift;
  raw |= std::uint64_t{flags.v} << kV;
  raw |= std::uint64_t{flags.r} << kR;
  raw |= std::uint64_t{flags.w} << kW;
  raw |= std::uint64_t{flags.x} << kX;
  raw |= std::uint64_t{flags.u} << kU;
  raw |= std::uint64_t{flags.g} << kG;
  raw |= std::uint64_t{flags.a} << kA;
  raw |= std::uint64_t{flags.d} << kD;
  return raw;
}

Pte Pte::decode(std::uint64_t raw) noexcept {
  Pte pte;
  pte.ppn = (raw >> kPpnShift) & sv39::kPpnMask;
  pte.flags.v = (raw >> kV) & 1;
  pte.flags.r = (raw >> kR) & 1;
  pte.flags.w = (raw >> kW) & 1;
  pte.flags.x = (raw >> kX) & 1;
  pte.flags.u = (raw >> kU) & 1;
  pte.flags.g = (raw >> kG) & 1;
  pte.flags.a = (raw >> kA) & 1;
  pte.flags.d = (raw >> kD) & 1;
  return pte;
}

void require_canonical(VirtAddr va) {
  if (!va.canonical()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "non-canonical Sv39 address 0x%llx",
                  static_cast<unsigned long long>(va.value));
    throw Error(ErrorCode::Canonicality, buf);
  }
}

Vpn split_vpn(VirtAddr va) {
  require_canonical(va);
  return Vpn{(va.value >> sv39::kPageShift) & sv39::kVpnMask};
}

std::uint64_t page_offset(VirtAddr va, PageSize size) noexcept {
  return va.value & (byte_size(size) - 1);
}

VirtAddr rebuild_va(Vpn vpn, std::uint64_t offset) noexcept {
  std::uint64_t raw = ((vpn.value & sv39::kVpnMask) << sv39::kPageShift) |
                      (offset & ((1ull << sv39::kPageShift) - 1));
  // Sign-extend from bit 38.
  const unsigned shift = 64 - sv39::kVaBits;
  raw = static_cast<std::uint64_t>(static_cast<std::int64_t>(raw << shift) >> shift);
  return VirtAddr{raw};
}

bool leaf_aligned(const Pte& pte, unsigned level) noexcept {
  const std::uint64_t low_mask = (1ull << (level * sv39::kLevelBits)) - 1;
  return (pte.ppn & low_mask) == 0;
}

PhysAddr compose_pa(const Pte& pte, VirtAddr va, unsigned level) {
  if (level >= sv39::kLevels) {
    throw Error(ErrorCode::Alignment, "walk level out of range: " + std::to_string(level));
  }
  if (!leaf_aligned(pte, level)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "misaligned superpage leaf ppn=0x%llx at level %u",
                  static_cast<unsigned long long>(pte.ppn), level);
    throw Error(ErrorCode::Alignment, buf);
  }
  const std::uint64_t low_mask = (1ull << (level * sv39::kLevelBits)) - 1;
  const std::uint64_t va_ppn_bits = (va.value >> sv39::kPageShift) & low_mask;
  const std::uint64_t ppn = (pte.ppn & ~low_mask) | va_ppn_bits;
  return PhysAddr{(ppn << sv39::kPageShift) | (va.value & ((1ull << sv39::kPageShift) - 1))};
}

}  // namespace tlbsim
