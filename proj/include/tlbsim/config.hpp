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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tlbsim/mmu.hpp"
#include "tlbsim/stats.hpp"
#include "tlbsim/trace.hpp"

namespace tlbsim {

/// Superpage regions installed in the page table before simulation:
/// `count` consecutive pages of `size` starting at `base`.
struct Mapping {
  VirtAddr base;
  PageSize size = PageSize::Mega2M;
  std::uint64_t count = 1;

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

/// Tracks which replacement seeds were given explicitly (itlb, dtlb, l2).
/// The rest are derived from the run seed.
using ExplicitSeeds = std::array<bool, 3>;

struct RunConfig {
  MmuConfig mmu;
  ExplicitSeeds explicit_seeds{};
  std::string preset;  // empty when not built from a preset
  std::variant<std::monostate, std::string, TraceSpec> trace;
  bool trace_seed_explicit = false;
  std::vector<Mapping> mappings;
  std::uint64_t seed = 1;
  std::optional<std::string> output_path;
  ReportFormat format = ReportFormat::Json;

  /// Sets the run seed and re-derives every seed that was not explicit.
  void reseed(std::uint64_t seed);
};

struct Preset {
  std::string name;
  MmuConfig mmu;
};

/// Configurations I-V: FA-32 L1s without L2 (I), with a 4-way 128/512-entry
/// L2 (II, III), and 8-way L1s of 64/128 entries over an 8-way 1024-entry
/// L2 (IV, V). L1s use PLRU, L2s random replacement.
const std::vector<Preset>& presets();

/// Throws ConfigError for unknown names.
const Preset& find_preset(std::string_view name);

RunConfig config_from_preset(std::string_view name);

/// Parses and validates a JSON run configuration. Relative trace paths are
/// resolved against `base_dir`. Unknown keys are rejected.
RunConfig parse_config(std::string_view json_text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

/// Derived replacement seed for structure `which` (0 itlb, 1 dtlb, 2 l2).
std::uint64_t derive_seed(std::uint64_t run_seed, unsigned which) noexcept;

/// Overwrites the non-explicit replacement seeds of `mmu` from `run_seed`.
void apply_seeds(MmuConfig& mmu, const ExplicitSeeds& seeds, std::uint64_t run_seed);

struct SweepVariant {
  std::string name;
  MmuConfig mmu;
  ExplicitSeeds explicit_seeds{};
};

struct SweepConfig {
  RunConfig base;
  std::vector<SweepVariant> variants;
};

/// A run configuration plus a `variants` array of named MMU overrides.
SweepConfig parse_sweep_config(std::string_view json_text, const std::string& base_dir = "");
SweepConfig load_sweep_config(const std::string& path);

/// Parses a trace generator object such as
/// {"generator":"conflict","l2_sets":1024,"distinct_tags":4,"repetitions":10}.
TraceSpec parse_trace_spec(std::string_view json_text, bool* seed_explicit = nullptr);

}  // namespace tlbsim
