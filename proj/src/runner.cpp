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

#include "tlbsim/runner.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "tlbsim/error.hpp"

namespace tlbsim {

using ordered_json = nlohmann::ordered_json;

Mmu make_mmu(const MmuConfig& mmu_config, std::span<const Mapping> mappings) {
  Mmu mmu(mmu_config);
  for (const Mapping& m : mappings) {
    const std::uint64_t first = split_vpn(m.base).value;
    for (std::uint64_t i = 0; i < m.count; ++i) {
      mmu.page_table().map_page(Vpn{first + i * pages_in(m.size)}, m.size);
    }
  }
  return mmu;
}

StatsReport simulate(const MmuConfig& mmu_config, std::span<const Mapping> mappings,
                     std::span<const AccessRecord> trace) {
  Mmu mmu = make_mmu(mmu_config, mappings);
  for (const AccessRecord& r : trace) mmu.step(r);
  StatsReport report = mmu.report();
  check_consistency(report);
  return report;
}

std::vector<AccessRecord> load_trace(const RunConfig& config) {
  if (const auto* path = std::get_if<std::string>(&config.trace)) return read_trace(*path);
  if (const auto* spec = std::get_if<TraceSpec>(&config.trace)) return generate(*spec);
  throw Error(ErrorCode::Config, "trace: no trace file or generator configured");
}

namespace {

void write_output(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write report: " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "short write to report: " + path);
}

std::string trace_name(const RunConfig& config) {
  if (const auto* path = std::get_if<std::string>(&config.trace)) return *path;
  if (const auto* spec = std::get_if<TraceSpec>(&config.trace)) return generator_name(*spec);
  return "";
}

std::optional<double> reduction(std::uint64_t baseline, std::uint64_t value) {
  if (baseline == 0) return std::nullopt;
  const double pct = (static_cast<double>(baseline) - static_cast<double>(value)) * 100.0 /
                     static_cast<double>(baseline);
  return std::round(pct * 1000.0) / 1000.0;
}

std::string organization(const TlbGeometry& g) {
  if (g.sets == 1 && g.ways > 1) return "fully-assoc.";
  if (g.ways == 1) return "direct-mapped";
  return std::to_string(g.ways) + "-way";
}

ordered_json geometry_json(const TlbGeometry& g) {
  ordered_json j;
  j["organization"] = organization(g);
  j["entries"] = g.entries();
  j["sets"] = g.sets;
  j["ways"] = g.ways;
  j["policy"] = policy_name(g.policy);
  const std::uint64_t bytes = reach(g.entries(), PageSize::Base4K);
  j["reach_bytes"] = bytes;
  j["reach"] = format_bytes(bytes);
  return j;
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string cell(const std::optional<double>& v) { return v ? ordered_json(*v).dump() : ""; }

}  // namespace

StatsReport run(const RunConfig& config) {
  StatsReport report;
  if (const auto* path = std::get_if<std::string>(&config.trace)) {
    Mmu mmu = make_mmu(config.mmu, config.mappings);
    TraceReader reader(*path);
    while (auto rec = reader.next()) mmu.step(*rec);
    report = mmu.report();
    check_consistency(report);
  } else {
    const std::vector<AccessRecord> trace = load_trace(config);
    report = simulate(config.mmu, config.mappings, trace);
  }
  if (config.output_path) write_output(*config.output_path, emit_report(report, config.format));
  return report;
}

SweepResult sweep(const SweepConfig& config) {
  const std::vector<AccessRecord> trace = load_trace(config.base);
  SweepResult result = sweep(config, trace);
  return result;
}

SweepResult sweep(const SweepConfig& config, std::span<const AccessRecord> trace) {
  if (config.variants.size() < 2) {
    throw Error(ErrorCode::Config, "variants: a sweep needs at least two variants");
  }
  std::vector<std::future<StatsReport>> jobs;
  jobs.reserve(config.variants.size());
  std::vector<MmuConfig> mmus;
  for (const SweepVariant& v : config.variants) {
    MmuConfig mmu = v.mmu;
    mmu.demand_paging = config.base.mmu.demand_paging;
    mmu.data_frame_base = config.base.mmu.data_frame_base;
    apply_seeds(mmu, v.explicit_seeds, config.base.seed);
    mmus.push_back(mmu);
  }
  for (const MmuConfig& mmu : mmus) {
    jobs.push_back(std::async(std::launch::async, [&config, &trace, mmu] {
      return simulate(mmu, config.base.mappings, trace);
    }));
  }

  SweepResult result;
  result.trace_name = trace_name(config.base);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    SweepRow row;
    row.name = config.variants[i].name;
    row.mmu = mmus[i];
    row.report = jobs[i].get();
    result.rows.push_back(std::move(row));
  }
  const StatsReport& base = result.rows.front().report;
  for (SweepRow& row : result.rows) {
    row.l2_miss_reduction_pct = reduction(base.l2.misses, row.report.l2.misses);
    row.l2_data_miss_reduction_pct =
        reduction(base.l2_side.data_misses, row.report.l2_side.data_misses);
    row.walk_reduction_pct = reduction(base.walks, row.report.walks);
  }
  return result;
}

std::string emit_sweep(const SweepResult& result, ReportFormat format) {
  if (format == ReportFormat::Json) {
    ordered_json j;
    j["trace"] = result.trace_name;
    j["variants"] = ordered_json::array();
    for (const SweepRow& row : result.rows) {
      ordered_json v;
      v["name"] = row.name;
      v["itlb"] = geometry_json(row.mmu.itlb);
      v["dtlb"] = geometry_json(row.mmu.dtlb);
      v["l2"] = row.mmu.l2 ? geometry_json(*row.mmu.l2) : ordered_json(nullptr);
      v["l2_miss_reduction_pct"] = optional_json(row.l2_miss_reduction_pct);
      v["l2_data_miss_reduction_pct"] = optional_json(row.l2_data_miss_reduction_pct);
      v["walk_reduction_pct"] = optional_json(row.walk_reduction_pct);
      v["report"] = ordered_json::parse(emit_report(row.report, ReportFormat::Json));
      j["variants"].push_back(std::move(v));
    }
    return j.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "variant,l2_organization,l2_entries,instructions,itlb.misses,dtlb.misses,l2.lookups,"
        "l2.misses,l2_side.data_misses,walks,walk_memory_accesses,total_cycles,"
        "l1_combined_mpki,l2_mpki,cpi,l2_miss_reduction_pct,l2_data_miss_reduction_pct,"
        "walk_reduction_pct\n";
  for (const SweepRow& row : result.rows) {
    const StatsReport& r = row.report;
    check_consistency(r);
    const DerivedMetrics d = compute_derived(r);
    os << row.name << ',' << (row.mmu.l2 ? organization(*row.mmu.l2) : "none") << ','
       << (row.mmu.l2 ? row.mmu.l2->entries() : 0) << ',' << r.instructions << ','
       << r.itlb.misses << ',' << r.dtlb.misses << ',' << r.l2.lookups << ',' << r.l2.misses
       << ',' << r.l2_side.data_misses << ',' << r.walks << ',' << r.walk_memory_accesses << ','
       << r.total_cycles << ',' << ordered_json(d.l1_combined_mpki).dump() << ','
       << ordered_json(d.l2_mpki).dump() << ',' << ordered_json(d.cpi).dump() << ','
       << cell(row.l2_miss_reduction_pct) << ',' << cell(row.l2_data_miss_reduction_pct) << ','
       << cell(row.walk_reduction_pct) << '\n';
  }
  return os.str();
}

std::string describe_presets(PresetFormat format) {
  const auto& all = presets();
  if (format == PresetFormat::Json) {
    ordered_json arr = ordered_json::array();
    for (const Preset& p : all) {
      ordered_json j;
      j["name"] = p.name;
      j["dtlb"] = geometry_json(p.mmu.dtlb);
      j["itlb"] = geometry_json(p.mmu.itlb);
      j["l2"] = p.mmu.l2 ? geometry_json(*p.mmu.l2) : ordered_json(nullptr);
      j["superpage_entries"] = p.mmu.superpage_entries;
      arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
  }
  const auto desc = [](const TlbGeometry& g) {
    return organization(g) + ", " + std::to_string(g.entries()) + " entries";
  };
  const auto reach_of = [](const TlbGeometry& g) {
    return format_bytes(reach(g.entries(), PageSize::Base4K));
  };
  std::ostringstream os;
  if (format == PresetFormat::Csv) {
    os << "name,dtlb,itlb,l2,dtlb_reach,itlb_reach,l2_reach\n";
    for (const Preset& p : all) {
      os << p.name << ',' << desc(p.mmu.dtlb) << ',' << desc(p.mmu.itlb) << ','
         << (p.mmu.l2 ? desc(*p.mmu.l2) : "-") << ',' << reach_of(p.mmu.dtlb) << ','
         << reach_of(p.mmu.itlb) << ',' << (p.mmu.l2 ? reach_of(*p.mmu.l2) : "-") << '\n';
    }
    return os.str();
  }
  os << std::left << std::setw(6) << "Conf" << std::setw(26) << "DTLB" << std::setw(26) << "ITLB"
     << std::setw(22) << "L2 TLB" << std::setw(12) << "DTLB Reach" << std::setw(12)
     << "ITLB Reach" << "L2 TLB Reach" << '\n';
  for (const Preset& p : all) {
    os << std::left << std::setw(6) << p.name << std::setw(26) << desc(p.mmu.dtlb)
       << std::setw(26) << desc(p.mmu.itlb) << std::setw(22)
       << (p.mmu.l2 ? desc(*p.mmu.l2) : "-") << std::setw(12) << reach_of(p.mmu.dtlb)
       << std::setw(12) << reach_of(p.mmu.itlb) << (p.mmu.l2 ? reach_of(*p.mmu.l2) : "-")
       << '\n';
  }
  return os.str();
}

}  // namespace tlbsim
