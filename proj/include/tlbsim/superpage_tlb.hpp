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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tlbsim/sv39.hpp"

namespace tlbsim {

struct SuperpageEntry {
  std::uint64_t base_vpn = 0;  // first 4KB vpn of the superpage
  std::uint64_t ppn = 0;       // leaf PPN, aligned to the page size
  PteFlags perms;
  PageSize size = PageSize::Mega2M;

  bool contains(Vpn vpn) const noexcept {
    return vpn.value - base_vpn < pages_in(size) && vpn.value >= base_vpn;
  }

  friend bool operator==(const SuperpageEntry&, const SuperpageEntry&) = default;
};

/// Fully-associative PLRU TLB for 2MB/1GB translations, probed in parallel
/// with the L1 base-page TLBs. Zero entries disables it.
class SuperpageTlb {
 public:
  explicit SuperpageTlb(std::size_t entries);

  std::size_t capacity() const noexcept { return entries_.size(); }
  std::size_t occupancy() const noexcept { return occupancy_; }

  std::optional<SuperpageEntry> lookup(Vpn vpn);

  struct Refill {
    std::size_t way = 0;
    std::optional<SuperpageEntry> evicted;
  };
  /// Requires capacity() > 0.
  Refill refill(const SuperpageEntry& entry);

  /// Invalidates every entry whose range contains `vpn`.
  std::size_t flush_containing(Vpn vpn);
  std::size_t flush_all();

 private:
  std::optional<std::size_t> find(Vpn vpn) const;

  std::vector<SuperpageEntry> entries_;
  std::vector<std::uint8_t> valid_;
  std::vector<std::uint8_t> plru_;
  std::size_t occupancy_ = 0;
};

}  // namespace tlbsim
