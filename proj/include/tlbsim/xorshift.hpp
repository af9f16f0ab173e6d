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

namespace tlbsim {

/// xorshift64* generator. Shared by random replacement and the seeded trace
/// generators so that a seed fixes every random choice in a run.
class XorShift64Star {
 public:
  // A zero seed would lock the generator at zero.
  static constexpr std::uint64_t kZeroSeedReplacement = 0x9E3779B97F4A7C15ull;

  explicit constexpr XorShift64Star(std::uint64_t seed = 1) noexcept
      : state_(seed == 0 ? kZeroSeedReplacement : seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  /// Upper 32 bits of the next output, reduced modulo `bound`.
  constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
    return (next() >> 32) % bound;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

  friend constexpr bool operator==(const XorShift64Star&, const XorShift64Star&) = default;

 private:
  std::uint64_t state_;
};

}  // namespace tlbsim
