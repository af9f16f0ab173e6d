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
#include <string>
#include <string_view>

#include "tlbsim/sv39.hpp"

namespace tlbsim {

struct StructureCounters {
  std::uint64_t lookups = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t refills = 0;
  std::uint64_t evictions = 0;
  std::uint64_t flushed_entries = 0;

  friend bool operator==(const StructureCounters&, const StructureCounters&) = default;
};

/// L2 lookups and misses split by the requesting side.
struct L2SideCounters {
  std::uint64_t fetch_lookups = 0;
  std::uint64_t fetch_misses = 0;
  std::uint64_t data_lookups = 0;
  std::uint64_t data_misses = 0;

  friend bool operator==(const L2SideCounters&, const L2SideCounters&) = default;
};

struct DerivedMetrics {
  double itlb_mpki = 0;
  double dtlb_mpki = 0;
  double l1_combined_mpki = 0;
  double l2_mpki = 0;
  double cpi = 0;  // latency-model CPI, not a hardware IPC claim

  friend bool operator==(const DerivedMetrics&, const DerivedMetrics&) = default;
};

inline constexpr std::string_view kCpiLabel = "latency-model CPI";

/// Counters of one simulation.
///
/// `itlb`/`dtlb` count requests at the L1 level: a translation served by the
/// superpage TLB is an L1 hit there, while `superpage` records the superpage
/// TLB's own probes. refills/evictions of `itlb`/`dtlb` refer to the
/// base-page arrays only.
struct StatsReport {
  StructureCounters itlb;
  StructureCounters dtlb;
  StructureCounters superpage;
  StructureCounters l2;
  L2SideCounters l2_side;
  bool l2_present = false;
  std::uint64_t walks = 0;
  std::uint64_t walk_memory_accesses = 0;
  std::uint64_t permission_faults = 0;
  std::uint64_t instructions = 0;
  std::uint64_t total_cycles = 0;
  DerivedMetrics derived;

  friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

enum class ReportFormat { Json, Csv };

const char* format_name(ReportFormat format) noexcept;
ReportFormat parse_format(std::string_view text);

/// misses * 1000 / instructions, rounded to 3 decimals. Throws
/// UndefinedMetric for zero instructions.
double mpki(std::uint64_t misses, std::uint64_t instructions);

/// entries x page size, in bytes.
std::uint64_t reach(std::uint64_t entries, PageSize page) noexcept;

/// "128KB", "4MB", ... using the largest unit that divides exactly.
std::string format_bytes(std::uint64_t bytes);

/// Throws InternalConsistencyError naming the first broken invariant.
void check_consistency(const StatsReport& report);

/// Throws UndefinedMetric when no instructions were simulated.
DerivedMetrics compute_derived(const StatsReport& report);

/// Validates counters, recomputes derived metrics and renders the report.
/// JSON keys appear in a fixed order; CSV is a header row of dotted keys and
/// one data row.
std::string emit_report(const StatsReport& report, ReportFormat format);

/// Inverse of the JSON emission.
StatsReport parse_report_json(std::string_view text);

}  // namespace tlbsim
