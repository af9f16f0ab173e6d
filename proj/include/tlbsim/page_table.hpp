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

#include <array>
#include <cstdint>
#include <unordered_map>

#include "tlbsim/error.hpp"
#include "tlbsim/sv39.hpp"

namespace tlbsim {

struct WalkResult {
  Pte pte;
  unsigned level = 0;
  unsigned memory_accesses = 0;
  PageSize size = PageSize::Base4K;
};

/// Leaf permissions used by demand mapping and preloaded regions.
inline constexpr PteFlags kDefaultLeafFlags{.v = true, .r = true, .w = true, .x = true, .u = true};

/// Software model of an OS-managed Sv39 page table.
///
/// Table frames and data frames come from disjoint allocators: data frames
/// count up from `data_frame_base`, table frames count up from
/// `kTableFrameBase`, so neither can hand out a frame the other owns.
class PageTable {
 public:
  static constexpr std::uint64_t kDefaultDataFrameBase = 0x1000;
  static constexpr std::uint64_t kTableFrameBase = 1ull << (sv39::kPpnBits - 1);

  explicit PageTable(std::uint64_t data_frame_base = kDefaultDataFrameBase);

  /// SATP root.
  std::uint64_t root_ppn() const noexcept { return root_ppn_; }

  /// Installs a leaf for the page of `size` containing `vpn` and returns its
  /// PPN. Idempotent for an identical (page, size); a different-size overlap
  /// throws MappingConflict.
  std::uint64_t map_page(Vpn vpn, PageSize size, PteFlags flags = kDefaultLeafFlags);

  /// Sequential lookup from the root. Sets the A bit (and D when `store`)
  /// on the leaf without extra memory accesses.
  WalkResult walk(VirtAddr va, bool store = false);

  /// Same traversal without touching A/D bits.
  WalkResult peek(VirtAddr va) const;

  /// TLB-bypassing reference translation.
  PhysAddr translate_oracle(VirtAddr va) const;

  /// Replaces the leaf PTE that currently maps `va`, the way an OS edits a
  /// mapping before issuing sfence.vma. No alignment check is applied.
  void update_leaf(VirtAddr va, const Pte& pte);

  std::uint64_t next_data_frame() const noexcept { return next_data_frame_; }
  std::size_t table_count() const noexcept { return tables_.size(); }

 private:
  using Table = std::array<std::uint64_t, sv39::kEntriesPerTable>;

  std::uint64_t allocate_table();
  std::uint64_t allocate_data(PageSize size);
  struct Location {
    WalkResult result;
    std::uint64_t table = 0;
    std::uint64_t index = 0;
  };

  bool has_mappings(std::uint64_t table_ppn, unsigned level) const;
  Location locate(VirtAddr va) const;
  static Error conflict(Vpn vpn, PageSize size);

  std::unordered_map<std::uint64_t, Table> tables_;
  std::uint64_t root_ppn_ = 0;
  std::uint64_t next_table_frame_ = kTableFrameBase;
  std::uint64_t next_data_frame_ = 0;
};

}  // namespace tlbsim
