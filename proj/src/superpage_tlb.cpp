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

#include "tlbsim/superpage_tlb.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "tlbsim/error.hpp"
#include "tlbsim/plru.hpp"

namespace tlbsim {

SuperpageTlb::SuperpageTlb(std::size_t entries) {
  if (entries != 0 && !std::has_single_bit(entries)) {
    throw Error(ErrorCode::Config, "superpage_entries: " + std::to_string(entries) +
                                       " is not zero or a power of two");
  }
  entries_.resize(entries);
  valid_.assign(entries, 0);
  if (entries > 1) plru_.assign(entries - 1, 0);
}

std::optional<std::size_t> SuperpageTlb::find(Vpn vpn) const {
  for (std::size_t way = 0; way < entries_.size(); ++way) {
    if (valid_[way] && entries_[way].contains(vpn)) return way;
  }
  return std::nullopt;
}

std::optional<SuperpageEntry> SuperpageTlb::lookup(Vpn vpn) {
  const auto way = find(vpn);
  if (!way) return std::nullopt;
  plru::touch(plru_, *way);
  return entries_[*way];
}

SuperpageTlb::Refill SuperpageTlb::refill(const SuperpageEntry& entry) {
  if (entries_.empty()) {
    throw Error(ErrorCode::InternalConsistency, "refill into a disabled superpage TLB");
  }
  Refill out;
  bool placed = false;
  for (std::size_t way = 0; way < entries_.size(); ++way) {
    const bool same = valid_[way] && entries_[way].base_vpn == entry.base_vpn &&
                      entries_[way].size == entry.size;
    if (same) {
      out.way = way;
      placed = true;
      break;
    }
  }
  if (!placed) {
    for (std::size_t way = 0; way < entries_.size(); ++way) {
      if (!valid_[way]) {
        out.way = way;
        placed = true;
        ++occupancy_;
        break;
      }
    }
  }
  if (!placed) {
    out.way = plru::victim(plru_);
    out.evicted = entries_[out.way];
  }
  entries_[out.way] = entry;
  valid_[out.way] = 1;
  plru::touch(plru_, out.way);
  return out;
}

std::size_t SuperpageTlb::flush_containing(Vpn vpn) {
  std::size_t flushed = 0;
  for (std::size_t way = 0; way < entries_.size(); ++way) {
    if (valid_[way] && entries_[way].contains(vpn)) {
      valid_[way] = 0;
      ++flushed;
    }
  }
  occupancy_ -= flushed;
  return flushed;
}

std::size_t SuperpageTlb::flush_all() {
  const std::size_t flushed = occupancy_;
  std::fill(valid_.begin(), valid_.end(), 0);
  occupancy_ = 0;
  return flushed;
}

}  // namespace tlbsim
