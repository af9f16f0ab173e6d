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

#include "tlbsim/page_table.hpp"

#include <cstdio>
#include <string>

#include "tlbsim/error.hpp"

namespace tlbsim {

namespace {

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

PageTable::PageTable(std::uint64_t data_frame_base) : next_data_frame_(data_frame_base) {
  if (data_frame_base >= kTableFrameBase) {
    throw Error(ErrorCode::Config, "data frame base " + hex(data_frame_base) +
                                       " overlaps the page-table frame region");
  }
  root_ppn_ = allocate_table();
}

std::uint64_t PageTable::allocate_table() {
  if (next_table_frame_ > sv39::kPpnMask) {
    throw Error(ErrorCode::MappingConflict, "page-table frame region exhausted");
  }
  const std::uint64_t ppn = next_table_frame_++;
  tables_[ppn].fill(0);
  return ppn;
}

std::uint64_t PageTable::allocate_data(PageSize size) {
  const std::uint64_t align = pages_in(size);
  const std::uint64_t ppn = (next_data_frame_ + align - 1) & ~(align - 1);
  if (ppn + align > kTableFrameBase) {
    throw Error(ErrorCode::MappingConflict, "data frame region exhausted");
  }
  next_data_frame_ = ppn + align;
  return ppn;
}

bool PageTable::has_mappings(std::uint64_t table_ppn, unsigned level) const {
  const Table& table = tables_.at(table_ppn);
  for (const std::uint64_t raw : table) {
    const Pte pte = Pte::decode(raw);
    if (!pte.flags.v) continue;
    if (pte.leaf()) return true;
    if (level > 0 && has_mappings(pte.ppn, level - 1)) return true;
  }
  return false;
}

std::uint64_t PageTable::map_page(Vpn vpn, PageSize size, PteFlags flags) {
  if ((vpn.value & ~sv39::kVpnMask) != 0) {
    throw Error(ErrorCode::Canonicality, "virtual page number out of range: " + hex(vpn.value));
  }
  flags.v = true;
  if (!(flags.r || flags.w || flags.x)) {
    throw Error(ErrorCode::Config, "leaf mapping needs at least one of R/W/X");
  }
  const unsigned target = leaf_level(size);
  std::uint64_t table = root_ppn_;
  for (unsigned level = sv39::kLevels - 1;; --level) {
    std::uint64_t& slot = tables_.at(table)[vpn.level(level)];
    Pte pte = Pte::decode(slot);
    if (level == target) {
      if (pte.flags.v && pte.leaf()) return pte.ppn;  // idempotent remap
      if (pte.pointer()) {
        if (has_mappings(pte.ppn, level - 1)) {
          throw conflict(vpn, size);
        }
        // An empty subtree is reclaimed by overwriting the pointer; its frames
        // are not reused.
      }
      Pte leaf{allocate_data(size), flags};
      slot = leaf.encode();
      return leaf.ppn;
    }
    if (pte.flags.v && pte.leaf()) throw conflict(vpn, size);
    if (!pte.flags.v) {
      const std::uint64_t child = allocate_table();
      slot = Pte{child, PteFlags{.v = true}}.encode();
      table = child;
    } else {
      table = pte.ppn;
    }
  }
}

Error PageTable::conflict(Vpn vpn, PageSize size) {
  return Error(ErrorCode::MappingConflict,
               "mapping " + std::string(page_size_name(size)) + " page at vpn " + hex(vpn.value) +
                   " overlaps an existing mapping of a different size");
}

PageTable::Location PageTable::locate(VirtAddr va) const {
  const Vpn vpn = split_vpn(va);
  Location loc;
  std::uint64_t table = root_ppn_;
  for (unsigned level = sv39::kLevels;; ) {
    --level;
    const std::uint64_t index = vpn.level(level);
    const Pte pte = Pte::decode(tables_.at(table)[index]);
    ++loc.result.memory_accesses;
    const bool reserved = pte.flags.w && !pte.flags.r;
    if (!pte.flags.v || reserved) {
      throw PageFault(level, "page fault at level " + std::to_string(level) + " for va " +
                                 hex(va.value));
    }
    if (pte.leaf()) {
      if (!leaf_aligned(pte, level)) {
        throw Error(ErrorCode::Alignment,
                    "misaligned superpage leaf at level " + std::to_string(level) + " for va " +
                        hex(va.value));
      }
      loc.result.pte = pte;
      loc.result.level = level;
      loc.result.size = size_for_level(level);
      loc.table = table;
      loc.index = index;
      return loc;
    }
    if (level == 0) {
      throw PageFault(0, "non-leaf PTE at level 0 for va " + hex(va.value));
    }
    table = pte.ppn;
  }
}

WalkResult PageTable::walk(VirtAddr va, bool store) {
  Location loc = locate(va);
  Pte& pte = loc.result.pte;
  pte.flags.a = true;
  if (store) pte.flags.d = true;
  tables_.at(loc.table)[loc.index] = pte.encode();
  return loc.result;
}

WalkResult PageTable::peek(VirtAddr va) const { return locate(va).result; }

PhysAddr PageTable::translate_oracle(VirtAddr va) const {
  const WalkResult r = locate(va).result;
  return compose_pa(r.pte, va, r.level);
}

void PageTable::update_leaf(VirtAddr va, const Pte& pte) {
  const Vpn vpn = split_vpn(va);
  std::uint64_t table = root_ppn_;
  for (unsigned level = sv39::kLevels; level-- > 0;) {
    std::uint64_t& slot = tables_.at(table)[vpn.level(level)];
    const Pte cur = Pte::decode(slot);
    if (!cur.flags.v) break;
    if (cur.leaf()) {
      slot = pte.encode();
      return;
    }
    table = cur.ppn;
  }
  throw PageFault(0, "update_leaf on unmapped va " + hex(va.value));
}

}  // namespace tlbsim
