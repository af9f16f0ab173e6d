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
#include <span>

namespace tlbsim {

/// Tree pseudo-LRU over a power-of-two number of ways.
///
/// The tree has ways-1 node bits stored heap-style: root at 0, children of
/// node i at 2i+1 (lower-numbered ways) and 2i+2. A node bit of 0 sends the
/// victim search to the lower subtree. Touching a way makes every node on its
/// path point away from it.
///
/// The functions operate on a caller-owned span of node bits so a TLB can
/// keep the state of all its sets in one flat array.
namespace plru {

void touch(std::span<std::uint8_t> nodes, std::size_t way) noexcept;
std::size_t victim(std::span<const std::uint8_t> nodes) noexcept;

}  // namespace plru

}  // namespace tlbsim
