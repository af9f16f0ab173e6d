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

#include <optional>

#include "tlbsim/sv39.hpp"

namespace tlbsim {

enum class AccessKind { Fetch, Load, Store };

struct DataAccess {
  AccessKind kind = AccessKind::Load;  // Load or Store
  VirtAddr va;

  friend bool operator==(const DataAccess&, const DataAccess&) = default;
};

/// One retired instruction: its fetch address plus at most one data access.
struct AccessRecord {
  VirtAddr pc;
  std::optional<DataAccess> data;

  friend bool operator==(const AccessRecord&, const AccessRecord&) = default;
};

}  // namespace tlbsim
