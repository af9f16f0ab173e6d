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
#include <optional>

#include "tlbsim/access.hpp"
#include "tlbsim/page_table.hpp"
#include "tlbsim/set_assoc_tlb.hpp"
#include "tlbsim/stats.hpp"
#include "tlbsim/superpage_tlb.hpp"

namespace tlbsim {

struct LatencyModel {
  std::uint64_t l1_hit_cycles = 1;
  std::uint64_t l2_extra_cycles = 2;     // added whenever the L2 is probed
  std::uint64_t mem_access_cycles = 20;  // per page-table load

  void validate() const;

  friend bool operator==(const LatencyModel&, const LatencyModel&) = default;
};

struct MmuConfig {
  TlbGeometry itlb;
  TlbGeometry dtlb;
  std::optional<TlbGeometry> l2;
  std::uint64_t superpage_entries = 4;
  LatencyModel latencies;
  bool demand_paging = true;
  std::uint64_t data_frame_base = PageTable::kDefaultDataFrameBase;

  void validate() const;

  friend bool operator==(const MmuConfig&, const MmuConfig&) = default;
};

enum class TranslationSource { L1, Superpage, L2, Walk };

const char* source_name(TranslationSource source) noexcept;

struct TranslationResult {
  PhysAddr pa;
  TranslationSource source = TranslationSource::L1;
  std::uint64_t cycles = 0;
  unsigned walk_accesses = 0;
  bool permission_fault = false;  // reported only; the access still completes
};

enum class Requester { Instruction, Data };

/// Round-robin grant between the instruction- and data-side walk requests.
/// Starts as if Data was granted last, so the first contended grant goes to
/// Instruction.
class Arbiter {
 public:
  /// At least one side must be pending.
  Requester arbitrate(bool instruction_pending, bool data_pending);
  Requester last_granted() const noexcept { return last_; }

 private:
  Requester last_ = Requester::Data;
};

struct StepOutcome {
  TranslationResult fetch;
  std::optional<TranslationResult> data;
  std::uint64_t cycles = 0;
};

/// L1 ITLB + L1 DTLB + superpage TLB, a shared L2 TLB, and the page-table
/// walker behind a round-robin arbiter. Owns its page table.
class Mmu {
 public:
  explicit Mmu(const MmuConfig& config);

  const MmuConfig& config() const noexcept { return config_; }
  PageTable& page_table() noexcept { return page_table_; }
  const PageTable& page_table() const noexcept { return page_table_; }

  /// Translates one access in isolation.
  TranslationResult translate(VirtAddr va, AccessKind kind);

  /// Simulates one instruction: fetch translation, then the optional data
  /// translation. When both miss in L1 the two requests are served in
  /// arbiter order, so the later one probes the L2 after the earlier refill.
  StepOutcome step(const AccessRecord& record);

  /// sfence.vma. With an address: entry flush in the L1s and the superpage
  /// TLB, whole-set flush in the L2. Without: everything.
  void sfence(std::optional<VirtAddr> va = std::nullopt);

  const SetAssocTlb& itlb() const noexcept { return itlb_; }
  const SetAssocTlb& dtlb() const noexcept { return dtlb_; }
  const SuperpageTlb& superpage() const noexcept { return superpage_; }
  const std::optional<SetAssocTlb>& l2() const noexcept { return l2_; }
  const Arbiter& arbiter() const noexcept { return arbiter_; }

  /// Counters so far; derived metrics are filled when instructions > 0.
  StatsReport report() const;

 private:
  struct Pending {
    VirtAddr va;
    Vpn vpn;
    AccessKind kind;
    Requester side;
  };

  std::optional<TranslationResult> probe_l1(const Pending& req);
  TranslationResult resolve_miss(const Pending& req);
  WalkResult walk(const Pending& req);
  void check_permissions(TranslationResult& result, const PteFlags& perms, AccessKind kind);
  static Pending make_request(VirtAddr va, AccessKind kind);

  SetAssocTlb& l1_for(Requester side) noexcept { return side == Requester::Instruction ? itlb_ : dtlb_; }
  StructureCounters& l1_counters(Requester side) noexcept {
    return side == Requester::Instruction ? stats_.itlb : stats_.dtlb;
  }

  MmuConfig config_;
  PageTable page_table_;
  SetAssocTlb itlb_;
  SetAssocTlb dtlb_;
  SuperpageTlb superpage_;
  std::optional<SetAssocTlb> l2_;
  Arbiter arbiter_;
  StatsReport stats_;
};

}  // namespace tlbsim
