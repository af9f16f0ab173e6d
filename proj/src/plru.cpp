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

#include "tlbsim/plru.hpp"

#include <cassert>

namespace tlbsim::plru {

void touch(std::span<std::uint8_t> nodes, std::size_t way) noexcept {
  const std::size_t ways = nodes.size() + 1;
  assert(way < ways);
  // Leaves sit at heap positions ways-1 .. 2*ways-2; climb from the leaf.
  std::size_t pos = way + ways - 1;
  while (pos != 0) {
    const std::size_t parent = (pos - 1) / 2;
    const bool from_lower = pos == 2 * parent + 1;
    nodes[parent] = from_lower ? 1 : 0;
    pos = parent;
  }
}

std::size_t victim(std::span<const std::uint8_t> nodes) noexcept {
  const std::size_t ways = nodes.size() + 1;
  std::size_t pos = 0;
  while (pos < ways - 1) {
    pos = nodes[pos] ? 2 * pos + 2 : 2 * pos + 1;
  }
  return pos - (ways - 1);
}

}  // namespace tlbsim::plru
