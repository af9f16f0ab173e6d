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

#pragma once

#include <cstdint>
#include <optional>

namespace tlbsim {

/// Sv39 geometry: 39-bit virtual addresses, 56-bit physical addresses,
/// a three-level radix table with 512 entries of 8 bytes per level.
namespace sv39 {
inline constexpr unsigned kPageShift = 12;
inline constexpr unsigned kLevelBits = 9;
inline constexpr unsigned kLevels = 3;
inline constexpr unsigned kVaBits = 39;
inline constexpr unsigned kPaBits = 56;
inline constexpr unsigned kPpnBits = 44;
inline constexpr unsigned kVpnBits = 27;
inline constexpr std::uint64_t kEntriesPerTable = 1ull << kLevelBits;
inline constexpr std::uint64_t kPpnMask = (1ull << kPpnBits) - 1;
inline constexpr std::uint64_t kVpnMask = (1ull << kVpnBits) - 1;
}  // namespace sv39

struct VirtAddr {
  std::uint64_t value = 0;

  /// Bits 63..39 must all equal bit 38.
  constexpr bool canonical() const noexcept {
    const auto upper = static_cast<std::int64_t>(value) >> (sv39::kVaBits - 1);
    return upper == 0 || upper == -1;
  }

  friend constexpr bool operator==(VirtAddr, VirtAddr) = default;
};

struct PhysAddr {
  std::uint64_t value = 0;

  friend constexpr bool operator==(PhysAddr, PhysAddr) = default;
};

/// Virtual page number of a 4KB page.
struct Vpn {
  std::uint64_t value = 0;

  constexpr std::uint64_t level(unsigned lvl) const noexcept {
    return (value >> (lvl * sv39::kLevelBits)) & (sv39::kEntriesPerTable - 1);
  }
  constexpr std::uint64_t vpn0() const noexcept { return level(0); }
  constexpr std::uint64_t vpn1() const noexcept { return level(1); }
  constexpr std::uint64_t vpn2() const noexcept { return level(2); }

  static constexpr Vpn from_levels(std::uint64_t vpn2, std::uint64_t vpn1,
                                   std::uint64_t vpn0) noexcept {
    return Vpn{(vpn2 << 18) | (vpn1 << 9) | vpn0};
  }

  friend constexpr bool operator==(Vpn, Vpn) = default;
};

enum class PageSize { Base4K, Mega2M, Giga1G };

constexpr std::uint64_t byte_size(PageSize size) noexcept {
  switch (size) {
    case PageSize::Base4K: return 1ull << 12;
    case PageSize::Mega2M: return 1ull << 21;
    case PageSize::Giga1G: return 1ull << 30;
  }
  return 0;
}

/// Walk level at which a leaf of this size lives (0 = 4KB leaf).
constexpr unsigned leaf_level(PageSize size) noexcept {
  switch (size) {
    case PageSize::Base4K: return 0;
    case PageSize::Mega2M: return 1;
    case PageSize::Giga1G: return 2;
  }
  return 0;
}

constexpr PageSize size_for_level(unsigned level) noexcept {
  return level == 0 ? PageSize::Base4K
                    : (level == 1 ? PageSize::Mega2M : PageSize::Giga1G);
}

/// Number of 4KB pages covered by one page of `size`.
constexpr std::uint64_t pages_in(PageSize size) noexcept {
  return byte_size(size) >> sv39::kPageShift;
}

const char* page_size_name(PageSize size) noexcept;
std::optional<PageSize> parse_page_size(const char* text) noexcept;

struct PteFlags {
  bool v = false;
  bool r = false;
  bool w = false;
  bool x = false;
  bool u = false;
  bool g = false;
  bool a = false;
  bool d = false;

  friend constexpr bool operator==(const PteFlags&, const PteFlags&) = default;
};

struct Pte {
  std::uint64_t ppn = 0;
  PteFlags flags;

  // A valid entry with R=W=X=0 points at the next table level.
  constexpr bool leaf() const noexcept { return flags.r || flags.w || flags.x; }
  constexpr bool pointer() const noexcept { return flags.v && !leaf(); }

  /// Standard Sv39 bit layout: flags in bits 7..0, PPN in bits 53..10.
  std::uint64_t encode() const noexcept;
  static Pte decode(std::uint64_t raw) noexcept;

  friend constexpr bool operator==(const Pte&, const Pte&) = default;
};

/// Throws CanonicalityError for addresses outside the Sv39 space.
Vpn split_vpn(VirtAddr va);

std::uint64_t page_offset(VirtAddr va, PageSize size) noexcept;

/// Inverse of split_vpn/page_offset for 4KB pages; sign-extends bit 38.
VirtAddr rebuild_va(Vpn vpn, std::uint64_t offset) noexcept;

/// True when the PPN's low bits below `level` are zero.
bool leaf_aligned(const Pte& pte, unsigned level) noexcept;

/// Physical address for `va` through the leaf `pte` found at walk `level`.
/// Throws AlignmentError for a misaligned superpage leaf.
PhysAddr compose_pa(const Pte& pte, VirtAddr va, unsigned level);

/// Throws CanonicalityError when `va` is not canonical.
void require_canonical(VirtAddr va);

}  // namespace tlbsim
