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
#include <span>
#include <vector>

#include "tlbsim/sv39.hpp"
#include "tlbsim/xorshift.hpp"

namespace tlbsim {

enum class ReplacementPolicy { PseudoLru, Random };

const char* policy_name(ReplacementPolicy policy) noexcept;

/// sets x ways, both powers of two. sets == 1 is fully-associative,
/// ways == 1 is direct-mapped. `seed` only matters for Random.
struct TlbGeometry {
  std::uint64_t sets = 1;
  std::uint64_t ways = 1;
  ReplacementPolicy policy = ReplacementPolicy::PseudoLru;
  std::uint64_t seed = 1;

  std::uint64_t entries() const noexcept { return sets * ways; }

  /// Throws ConfigError naming `what` when sets/ways are not powers of two.
  void validate(const char* what = "tlb") const;

  friend bool operator==(const TlbGeometry&, const TlbGeometry&) = default;
};

std::uint64_t index_of(Vpn vpn, const TlbGeometry& geometry) noexcept;
std::uint64_t tag_of(Vpn vpn, const TlbGeometry& geometry) noexcept;

struct TlbEntry {
  std::uint64_t tag = 0;
  std::uint64_t ppn = 0;
  PteFlags perms;
  PageSize size = PageSize::Base4K;

  friend bool operator==(const TlbEntry&, const TlbEntry&) = default;
};

struct RefillOutcome {
  std::size_t placed_way = 0;
  std::optional<TlbEntry> evicted;
};

/// Set-associative TLB of 4KB translations.
///
/// Valid bits live in their own array, separate from the entry payloads, so
/// flushes and occupancy checks never read entries. Replacement state is one
/// PLRU tree per set (empty for direct-mapped) or a single xorshift64*
/// stream shared by all sets.
class SetAssocTlb {
 public:
  explicit SetAssocTlb(const TlbGeometry& geometry);

  const TlbGeometry& geometry() const noexcept { return geometry_; }

  /// Searches the indexed set. A hit touches the PLRU path; a miss changes
  /// nothing.
  std::optional<TlbEntry> lookup(Vpn vpn);

  /// Way holding `vpn`, without touching replacement state.
  std::optional<std::size_t> find_way(Vpn vpn) const;

  /// Places `entry` (tag taken from `vpn`) at the first invalid way, or at
  /// the policy victim when the set is full. A valid duplicate is replaced
  /// in place.
  RefillOutcome refill(Vpn vpn, TlbEntry entry);

  bool flush_entry(Vpn vpn);
  std::size_t flush_set(Vpn vpn);
  /// Clears every valid bit; returns how many were set. Replacement and RNG
  /// state survive.
  std::size_t flush_all();

  std::size_t occupancy() const noexcept { return occupancy_; }

  bool valid(std::size_t set, std::size_t way) const { return valid_[slot(set, way)] != 0; }
  const TlbEntry& entry(std::size_t set, std::size_t way) const { return entries_[slot(set, way)]; }
  std::span<const std::uint8_t> plru_nodes(std::size_t set) const;

  /// Victim for a full set under the configured policy. Random advances the
  /// generator exactly once.
  std::size_t victim(std::size_t set);
  std::size_t random_victim();

  const XorShift64Star& rng() const noexcept { return rng_; }

 private:
  std::size_t slot(std::size_t set, std::size_t way) const noexcept {
    return set * geometry_.ways + way;
  }
  std::span<std::uint8_t> plru_nodes_mut(std::size_t set);
  void touch(std::size_t set, std::size_t way);

  TlbGeometry geometry_;
  std::vector<TlbEntry> entries_;
  std::vector<std::uint8_t> valid_;
  std::vector<std::uint8_t> plru_;
  XorShift64Star rng_;
  std::size_t occupancy_ = 0;
};

}  // namespace tlbsim
