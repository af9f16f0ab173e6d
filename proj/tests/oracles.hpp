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

// Reference models used by the tests. Each is written from the textual
// definition and shares no code with the library.

#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace oracle {

// xorshift64* with the published constants.
struct XorShift {
  std::uint64_t s;
  explicit XorShift(std::uint64_t seed) : s(seed ? seed : 0x9E3779B97F4A7C15ull) {}
  std::uint64_t next() {
    std::uint64_t x = s;
    x = x ^ (x >> 12);
    x = x ^ (x << 25);
    x = x ^ (x >> 27);
    s = x;
    return x * 2685821657736338717ull;
  }
  std::uint64_t below(std::uint64_t n) { return (next() >> 32) % n; }
};

// Tree PLRU over [0, ways). Each internal node covers a range [lo, hi) and
// holds one bit: false sends the victim search to [lo, mid), true to [mid, hi).
class TreePlru {
 public:
  explicit TreePlru(unsigned ways) : ways_(ways) {}

  void touch(unsigned way) {
    unsigned lo = 0, hi = ways_;
    while (hi - lo > 1) {
      const unsigned mid = (lo + hi) / 2;
      const bool upper = way >= mid;
      bits_[{lo, hi}] = !upper;
      if (upper) lo = mid; else hi = mid;
    }
  }

  unsigned victim() const {
    unsigned lo = 0, hi = ways_;
    while (hi - lo > 1) {
      const unsigned mid = (lo + hi) / 2;
      const auto it = bits_.find({lo, hi});
      const bool upper = it != bits_.end() && it->second;
      if (upper) lo = mid; else hi = mid;
    }
    return lo;
  }

 private:
  unsigned ways_;
  std::map<std::pair<unsigned, unsigned>, bool> bits_;
};

// True LRU over way numbers.
class TrueLru {
 public:
  explicit TrueLru(unsigned ways) {
    for (unsigned w = 0; w < ways; ++w) order_.push_back(w);
  }
  void touch(unsigned way) {
    order_.remove(way);
    order_.push_back(way);
  }
  unsigned victim() const { return order_.front(); }

 private:
  std::list<unsigned> order_;  // front is least recent
};

enum class Policy { Plru, Random };

// Fully associative TLB keyed by vpn. Refill takes the lowest free way,
// otherwise the policy victim. PLRU state is touched on hit and on refill.
class FullyAssoc {
 public:
  FullyAssoc(unsigned ways, Policy policy, std::uint64_t seed)
      : slots_(ways), plru_(ways), policy_(policy), rng_(seed) {}

  std::optional<std::uint64_t> lookup(std::uint64_t vpn) {
    for (unsigned w = 0; w < slots_.size(); ++w) {
      if (slots_[w] && slots_[w]->first == vpn) {
        plru_.touch(w);
        return slots_[w]->second;
      }
    }
    return std::nullopt;
  }

  void refill(std::uint64_t vpn, std::uint64_t ppn) {
    std::optional<unsigned> target;
    for (unsigned w = 0; w < slots_.size() && !target; ++w) {
      if (slots_[w] && slots_[w]->first == vpn) target = w;
    }
    for (unsigned w = 0; w < slots_.size() && !target; ++w) {
      if (!slots_[w]) target = w;
    }
    if (!target) {
      target = policy_ == Policy::Plru ? plru_.victim()
                                       : static_cast<unsigned>(rng_.below(slots_.size()));
    }
    slots_[*target] = std::make_pair(vpn, ppn);
    plru_.touch(*target);
  }

  bool flush(std::uint64_t vpn) {
    for (auto& s : slots_) {
      if (s && s->first == vpn) {
        s.reset();
        return true;
      }
    }
    return false;
  }

 private:
  std::vector<std::optional<std::pair<std::uint64_t, std::uint64_t>>> slots_;
  TreePlru plru_;
  Policy policy_;
  XorShift rng_;
};

// Direct-mapped TLB: slot = vpn mod sets.
class DirectMapped {
 public:
  explicit DirectMapped(std::uint64_t sets) : sets_(sets) {}

  std::optional<std::uint64_t> lookup(std::uint64_t vpn) const {
    const auto it = slots_.find(vpn % sets_);
    if (it == slots_.end() || it->second.first != vpn) return std::nullopt;
    return it->second.second;
  }
  void refill(std::uint64_t vpn, std::uint64_t ppn) { slots_[vpn % sets_] = {vpn, ppn}; }
  bool flush(std::uint64_t vpn) {
    const auto it = slots_.find(vpn % sets_);
    if (it == slots_.end() || it->second.first != vpn) return false;
    slots_.erase(it);
    return true;
  }

 private:
  std::uint64_t sets_;
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> slots_;
};

// Sv39 bit slicing by arithmetic rather than masks.
inline std::uint64_t vpn_level(std::uint64_t va, unsigned level) {
  return (va / (1ull << (12 + 9 * level))) % 512;
}

}  // namespace oracle
