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
#include <span>
#include <string>
#include <vector>

#include "tlbsim/config.hpp"
#include "tlbsim/stats.hpp"

namespace tlbsim {

/// Builds the MMU for `mmu` and installs the preloaded superpage regions.
Mmu make_mmu(const MmuConfig& mmu, std::span<const Mapping> mappings);

/// Steps every record through a fresh MMU. Throws InternalConsistencyError if
/// the resulting counters violate conservation.
StatsReport simulate(const MmuConfig& mmu, std::span<const Mapping> mappings,
                     std::span<const AccessRecord> trace);

/// Full run: resolves the trace (file or generator), simulates, and writes
/// the rendered report to the configured output path if any.
StatsReport run(const RunConfig& config);

/// Materializes the configured trace.
std::vector<AccessRecord> load_trace(const RunConfig& config);

struct SweepRow {
  std::string name;
  MmuConfig mmu;
  StatsReport report;
  // Relative to the first variant; nullopt when the baseline count is zero.
  std::optional<double> l2_miss_reduction_pct;
  std::optional<double> l2_data_miss_reduction_pct;
  std::optional<double> walk_reduction_pct;
};

struct SweepResult {
  std::string trace_name;
  std::vector<SweepRow> rows;
};

/// Runs every variant on one shared trace instance, in parallel, and merges
/// the rows in variant order.
SweepResult sweep(const SweepConfig& config);
SweepResult sweep(const SweepConfig& config, std::span<const AccessRecord> trace);

std::string emit_sweep(const SweepResult& result, ReportFormat format);

enum class PresetFormat { Text, Json, Csv };

/// Resolved presets with entries, sets, ways and reach per structure.
std::string describe_presets(PresetFormat format);

}  // namespace tlbsim
