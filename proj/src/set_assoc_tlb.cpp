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

#include "tlbsim/set_assoc_tlb.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "tlbsim/error.hpp"
#include "tlbsim/plru.hpp"

namespace tlbsim {

const char* policy_name(ReplacementPolicy policy) noexcept {
  return policy == ReplacementPolicy::Random ? "random" : "plru";
}

void TlbGeometry::validate(const char* what) const {
  if (sets == 0 || !std::has_single_bit(sets)) {
    throw Error(ErrorCode::Config, std::string(what) + ".sets: " + std::to_string(sets) +
                                       " is not a positive power of two");
  }
  if (ways == 0 || !std::has_single_bit(ways)) {
    throw Error(ErrorCode::Config, std::string(what) + ".ways: " + std::to_string(ways) +
                                       " is not a positive power of two");
  }
  if (sets > (1ull << sv39::kVpnBits)) {
    throw Error(ErrorCode::Config, std::string(what) + ".sets: more sets than virtual pages");
  }
}

std::uint64_t index_of(Vpn vpn, const TlbGeometry& geometry) noexcept {
  return vpn.value & (geometry.sets - 1);
}

std::uint64_t tag_of(Vpn vpn, const TlbGeometry& geometry) noexcept {
  return vpn.value >> std::countr_zero(geometry.sets);
}

SetAssocTlb::SetAssocTlb(const TlbGeometry& geometry)
    : geometry_(geometry), rng_(geometry.seed) {
  geometry_.validate();
  entries_.resize(geometry_.entries());
  valid_.assign(geometry_.entries(), 0);
  if (geometry_.policy == ReplacementPolicy::PseudoLru) {
    plru_.assign(geometry_.sets * (geometry_.ways - 1), 0);
  }
}

std::span<const std::uint8_t> SetAssocTlb::plru_nodes(std::size_t set) const {
  if (plru_.empty()) return {};
  const std::size_t n = geometry_.ways - 1;
  return std::span<const std::uint8_t>(plru_).subspan(set * n, n);
}

std::span<std::uint8_t> SetAssocTlb::plru_nodes_mut(std::size_t set) {
  if (plru_.empty()) return {};
  const std::size_t n = geometry_.ways - 1;
  return std::span<std::uint8_t>(plru_).subspan(set * n, n);
}

void SetAssocTlb::touch(std::size_t set, std::size_t way) {
  if (geometry_.policy == ReplacementPolicy::PseudoLru) plru::touch(plru_nodes_mut(set), way);
}

std::optional<std::size_t> SetAssocTlb::find_way(Vpn vpn) const {
  const std::size_t set = index_of(vpn, geometry_);
  const std::uint64_t tag = tag_of(vpn, geometry_);
  for (std::size_t way = 0; way < geometry_.ways; ++way) {
    const std::size_t s = slot(set, way);
    if (valid_[s] && entries_[s].tag == tag) return way;
  }
  return std::nullopt;
}

std::optional<TlbEntry> SetAssocTlb::lookup(Vpn vpn) {
  const auto way = find_way(vpn);
  if (!way) return std::nullopt;
  const std::size_t set = index_of(vpn, geometry_);
  touch(set, *way);
  return entries_[slot(set, *way)];
}

std::size_t SetAssocTlb::random_victim() {
  return static_cast<std::size_t>(rng_.next_below(geometry_.ways));
}

std::size_t SetAssocTlb::victim(std::size_t set) {
  if (geometry_.policy == ReplacementPolicy::Random) return random_victim();
  return plru::victim(plru_nodes(set));
}

RefillOutcome SetAssocTlb::refill(Vpn vpn, TlbEntry entry) {
  if (entry.size != PageSize::Base4K) {
    throw Error(ErrorCode::InternalConsistency,
                "set-associative TLB holds 4KB translations only");
  }
  const std::size_t set = index_of(vpn, geometry_);
  entry.tag = tag_of(vpn, geometry_);

  RefillOutcome out;
  if (const auto dup = find_way(vpn)) {
    out.placed_way = *dup;
  } else {
    bool placed = false;
    for (std::size_t way = 0; way < geometry_.ways; ++way) {
      if (!valid_[slot(set, way)]) {
        out.placed_way = way;
        placed = true;
        break;
      }
    }
    if (!placed) {
      out.placed_way = victim(set);
      out.evicted = entries_[slot(set, out.placed_way)];
    } else {
      ++occupancy_;
    }
  }
  const std::size_t s = slot(set, out.placed_way);
  entries_[s] = entry;
  valid_[s] = 1;
  touch(set, out.placed_way);
  return out;
}

bool SetAssocTlb::flush_entry(Vpn vpn) {
  const auto way = find_way(vpn);
  if (!way) return false;
  valid_[slot(index_of(vpn, geometry_), *way)] = 0;
  --occupancy_;
  return true;
}

std::size_t SetAssocTlb::flush_set(Vpn vpn) {
  const std::size_t set = index_of(vpn, geometry_);
  std::size_t flushed = 0;
  for (std::size_t way = 0; way < geometry_.ways; ++way) {
    auto& v = valid_[slot(set, way)];
    if (v) {
      v = 0;
      ++flushed;
    }
  }
  occupancy_ -= flushed;
  return flushed;
}

std::size_t SetAssocTlb::flush_all() {
  const std::size_t flushed = occupancy_;
  std::fill(valid_.begin(), valid_.end(), 0);
  occupancy_ = 0;
  return flushed;
}

}  // namespace tlbsim
