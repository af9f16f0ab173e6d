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

#include "tlbsim/mmu.hpp"

#include <string>

#include "tlbsim/error.hpp"

namespace tlbsim {

const char* source_name(TranslationSource source) noexcept {
  switch (source) {
    case TranslationSource::L1: return "L1";
    case TranslationSource::Superpage: return "Superpage";
    case TranslationSource::L2: return "L2";
    case TranslationSource::Walk: return "Walk";
  }
  return "?";
}

void LatencyModel::validate() const {
  if (l1_hit_cycles < 1) {
    throw Error(ErrorCode::Config, "latencies.l1_hit_cycles: must be at least 1");
  }
}

void MmuConfig::validate() const {
  itlb.validate("itlb");
  dtlb.validate("dtlb");
  if (l2) l2->validate("l2");
  latencies.validate();
  SuperpageTlb probe(superpage_entries);  // validates the entry count
  (void)probe;
}

Requester Arbiter::arbitrate(bool instruction_pending, bool data_pending) {
  if (instruction_pending && data_pending) {
    last_ = last_ == Requester::Instruction ? Requester::Data : Requester::Instruction;
  } else if (instruction_pending) {
    last_ = Requester::Instruction;
  } else if (data_pending) {
    last_ = Requester::Data;
  } else {
    throw Error(ErrorCode::InternalConsistency, "arbitrate called with no pending request");
  }
  return last_;
}

namespace {
const MmuConfig& validated(const MmuConfig& config) {
  config.validate();
  return config;
}
}  // namespace

Mmu::Mmu(const MmuConfig& config)
    : config_(validated(config)),
      page_table_(config.data_frame_base),
      itlb_(config.itlb),
      dtlb_(config.dtlb),
      superpage_(config.superpage_entries) {
  if (config_.l2) l2_.emplace(*config_.l2);
  stats_.l2_present = l2_.has_value();
}

Mmu::Pending Mmu::make_request(VirtAddr va, AccessKind kind) {
  return Pending{va, split_vpn(va), kind,
                 kind == AccessKind::Fetch ? Requester::Instruction : Requester::Data};
}

void Mmu::check_permissions(TranslationResult& result, const PteFlags& perms, AccessKind kind) {
  const bool allowed = kind == AccessKind::Fetch  ? perms.x
                       : kind == AccessKind::Load ? perms.r
                                                  : perms.w;
  if (!allowed) {
    result.permission_fault = true;
    ++stats_.permission_faults;
  }
}

std::optional<TranslationResult> Mmu::probe_l1(const Pending& req) {
  StructureCounters& level = l1_counters(req.side);
  ++level.lookups;

  // Base-page and superpage arrays are searched in the same cycle.
  const auto base = l1_for(req.side).lookup(req.vpn);
  std::optional<SuperpageEntry> super;
  if (superpage_.capacity() > 0) {
    ++stats_.superpage.lookups;
    super = superpage_.lookup(req.vpn);
    if (super) {
      ++stats_.superpage.hits;
    } else {
      ++stats_.superpage.misses;
    }
  }

  if (!base && !super) {
    ++level.misses;
    return std::nullopt;
  }
  ++level.hits;
  TranslationResult out;
  out.cycles = config_.latencies.l1_hit_cycles;
  if (base) {
    out.source = TranslationSource::L1;
    out.pa = PhysAddr{(base->ppn << sv39::kPageShift) | page_offset(req.va, PageSize::Base4K)};
    check_permissions(out, base->perms, req.kind);
  } else {
    out.source = TranslationSource::Superpage;
    out.pa = compose_pa(Pte{super->ppn, super->perms}, req.va, leaf_level(super->size));
    check_permissions(out, super->perms, req.kind);
  }
  return out;
}

WalkResult Mmu::walk(const Pending& req) {
  const bool store = req.kind == AccessKind::Store;
  try {
    return page_table_.walk(req.va, store);
  } catch (const PageFault&) {
    if (!config_.demand_paging) throw;
  }
  page_table_.map_page(req.vpn, PageSize::Base4K);
  return page_table_.walk(req.va, store);
}

TranslationResult Mmu::resolve_miss(const Pending& req) {
  const LatencyModel& lat = config_.latencies;
  const bool fetch = req.side == Requester::Instruction;
  TranslationResult out;
  out.cycles = lat.l1_hit_cycles;

  if (l2_) {
    out.cycles += lat.l2_extra_cycles;
    ++stats_.l2.lookups;
    ++(fetch ? stats_.l2_side.fetch_lookups : stats_.l2_side.data_lookups);
    if (const auto hit = l2_->lookup(req.vpn)) {
      ++stats_.l2.hits;
      out.source = TranslationSource::L2;
      out.pa = PhysAddr{(hit->ppn << sv39::kPageShift) | page_offset(req.va, PageSize::Base4K)};
      check_permissions(out, hit->perms, req.kind);
      StructureCounters& l1c = l1_counters(req.side);
      const RefillOutcome r = l1_for(req.side).refill(req.vpn, *hit);
      ++l1c.refills;
      if (r.evicted) ++l1c.evictions;
      return out;
    }
    ++stats_.l2.misses;
    ++(fetch ? stats_.l2_side.fetch_misses : stats_.l2_side.data_misses);
  }

  const WalkResult w = walk(req);
  ++stats_.walks;
  stats_.walk_memory_accesses += w.memory_accesses;
  out.source = TranslationSource::Walk;
  out.walk_accesses = w.memory_accesses;
  out.cycles += w.memory_accesses * lat.mem_access_cycles;
  out.pa = compose_pa(w.pte, req.va, w.level);
  check_permissions(out, w.pte.flags, req.kind);

  if (w.size == PageSize::Base4K) {
    const TlbEntry entry{0, w.pte.ppn, w.pte.flags, PageSize::Base4K};
    if (l2_) {
      const RefillOutcome r = l2_->refill(req.vpn, entry);
      ++stats_.l2.refills;
      if (r.evicted) ++stats_.l2.evictions;
    }
    StructureCounters& l1c = l1_counters(req.side);
    const RefillOutcome r = l1_for(req.side).refill(req.vpn, entry);
    ++l1c.refills;
    if (r.evicted) ++l1c.evictions;
  } else if (superpage_.capacity() > 0) {
    const std::uint64_t span = pages_in(w.size);
    const SuperpageEntry entry{req.vpn.value & ~(span - 1), w.pte.ppn, w.pte.flags, w.size};
    const SuperpageTlb::Refill r = superpage_.refill(entry);
    ++stats_.superpage.refills;
    if (r.evicted) ++stats_.superpage.evictions;
  }
  return out;
}

TranslationResult Mmu::translate(VirtAddr va, AccessKind kind) {
  const Pending req = make_request(va, kind);
  if (auto hit = probe_l1(req)) return *hit;
  arbiter_.arbitrate(req.side == Requester::Instruction, req.side == Requester::Data);
  return resolve_miss(req);
}

StepOutcome Mmu::step(const AccessRecord& record) {
  const Pending fetch_req = make_request(record.pc, AccessKind::Fetch);
  std::optional<Pending> data_req;
  if (record.data) data_req = make_request(record.data->va, record.data->kind);

  StepOutcome out;
  std::optional<TranslationResult> fetch = probe_l1(fetch_req);
  std::optional<TranslationResult> data;
  if (data_req) data = probe_l1(*data_req);

  const bool fetch_pending = !fetch;
  const bool data_pending = data_req && !data;
  if (fetch_pending && data_pending) {
    if (arbiter_.arbitrate(true, true) == Requester::Instruction) {
      fetch = resolve_miss(fetch_req);
      data = resolve_miss(*data_req);
    } else {
      data = resolve_miss(*data_req);
      fetch = resolve_miss(fetch_req);
    }
  } else if (fetch_pending) {
    arbiter_.arbitrate(true, false);
    fetch = resolve_miss(fetch_req);
  } else if (data_pending) {
    arbiter_.arbitrate(false, true);
    data = resolve_miss(*data_req);
  }

  out.fetch = *fetch;
  out.data = data;
  out.cycles = 1 + out.fetch.cycles + (data ? data->cycles : 0);
  ++stats_.instructions;
  stats_.total_cycles += out.cycles;
  return out;
}

void Mmu::sfence(std::optional<VirtAddr> va) {
  if (va) {
    const Vpn vpn = split_vpn(*va);
    stats_.itlb.flushed_entries += itlb_.flush_entry(vpn) ? 1 : 0;
    stats_.dtlb.flushed_entries += dtlb_.flush_entry(vpn) ? 1 : 0;
    stats_.superpage.flushed_entries += superpage_.flush_containing(vpn);
    if (l2_) stats_.l2.flushed_entries += l2_->flush_set(vpn);
    return;
  }
  stats_.itlb.flushed_entries += itlb_.flush_all();
  stats_.dtlb.flushed_entries += dtlb_.flush_all();
  stats_.superpage.flushed_entries += superpage_.flush_all();
  if (l2_) stats_.l2.flushed_entries += l2_->flush_all();
}

StatsReport Mmu::report() const {
  StatsReport r = stats_;
  if (r.instructions > 0) r.derived = compute_derived(r);
  return r;
}

}  // namespace tlbsim
