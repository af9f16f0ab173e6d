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

#include "tlbsim/stats.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "tlbsim/error.hpp"

namespace tlbsim {

using ordered_json = nlohmann::ordered_json;

const char* format_name(ReportFormat format) noexcept {
  return format == ReportFormat::Csv ? "csv" : "json";
}

ReportFormat parse_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::Config, "format: expected \"json\" or \"csv\", got \"" +
                                     std::string(text) + "\"");
}

namespace {

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

void check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InternalConsistency, "counter invariant violated: " + what);
}

void check_structure(const StructureCounters& c, const char* name) {
  check(c.hits + c.misses == c.lookups,
        std::string(name) + ".hits + " + name + ".misses != " + name + ".lookups");
}

ordered_json structure_json(const StructureCounters& c) {
  ordered_json j;
  j["lookups"] = c.lookups;
  j["hits"] = c.hits;
  j["misses"] = c.misses;
  j["refills"] = c.refills;
  j["evictions"] = c.evictions;
  j["flushed_entries"] = c.flushed_entries;
  return j;
}

StructureCounters structure_from(const ordered_json& j) {
  StructureCounters c;
  c.lookups = j.at("lookups").get<std::uint64_t>();
  c.hits = j.at("hits").get<std::uint64_t>();
  c.misses = j.at("misses").get<std::uint64_t>();
  c.refills = j.at("refills").get<std::uint64_t>();
  c.evictions = j.at("evictions").get<std::uint64_t>();
  c.flushed_entries = j.at("flushed_entries").get<std::uint64_t>();
  return c;
}

ordered_json report_json(const StatsReport& r, const DerivedMetrics& d) {
  ordered_json j;
  j["itlb"] = structure_json(r.itlb);
  j["dtlb"] = structure_json(r.dtlb);
  j["superpage"] = structure_json(r.superpage);
  j["l2"] = structure_json(r.l2);
  j["l2_present"] = r.l2_present;
  ordered_json side;
  side["fetch_lookups"] = r.l2_side.fetch_lookups;
  side["fetch_misses"] = r.l2_side.fetch_misses;
  side["data_lookups"] = r.l2_side.data_lookups;
  side["data_misses"] = r.l2_side.data_misses;
  j["l2_side"] = side;
  j["walks"] = r.walks;
  j["walk_memory_accesses"] = r.walk_memory_accesses;
  j["permission_faults"] = r.permission_faults;
  j["instructions"] = r.instructions;
  j["total_cycles"] = r.total_cycles;
  ordered_json dj;
  dj["itlb_mpki"] = d.itlb_mpki;
  dj["dtlb_mpki"] = d.dtlb_mpki;
  dj["l1_combined_mpki"] = d.l1_combined_mpki;
  dj["l2_mpki"] = d.l2_mpki;
  dj["cpi"] = d.cpi;
  dj["cpi_label"] = std::string(kCpiLabel);
  j["derived"] = dj;
  return j;
}

void flatten(const ordered_json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else if (value.is_string()) {
      out.emplace_back(name, value.get<std::string>());
    } else {
      out.emplace_back(name, value.dump());
    }
  }
}

}  // namespace

double mpki(std::uint64_t misses, std::uint64_t instructions) {
  if (instructions == 0) {
    throw Error(ErrorCode::UndefinedMetric, "MPKI is undefined for zero instructions");
  }
  return round3(static_cast<double>(misses) * 1000.0 / static_cast<double>(instructions));
}

std::uint64_t reach(std::uint64_t entries, PageSize page) noexcept {
  return entries * byte_size(page);
}

std::string format_bytes(std::uint64_t bytes) {
  static constexpr const char* kUnits[] = {"B", "KB", "MB", "GB", "TB"};
  std::size_t unit = 0;
  while (bytes != 0 && bytes % 1024 == 0 && unit + 1 < std::size(kUnits)) {
    bytes /= 1024;
    ++unit;
  }
  return std::to_string(bytes) + kUnits[unit];
}

void check_consistency(const StatsReport& r) {
  check_structure(r.itlb, "itlb");
  check_structure(r.dtlb, "dtlb");
  check_structure(r.superpage, "superpage");
  check_structure(r.l2, "l2");
  const std::uint64_t l1_misses = r.itlb.misses + r.dtlb.misses;
  if (r.l2_present) {
    check(r.l2.lookups == l1_misses, "l2.lookups != itlb.misses + dtlb.misses");
    check(r.l2.misses == r.walks, "l2.misses != walks");
  } else {
    check(r.l2 == StructureCounters{}, "l2 counters nonzero without an L2 TLB");
    check(r.l2_side == L2SideCounters{}, "l2_side counters nonzero without an L2 TLB");
    check(r.walks == l1_misses, "walks != itlb.misses + dtlb.misses without an L2 TLB");
  }
  check(r.l2_side.fetch_lookups + r.l2_side.data_lookups == r.l2.lookups,
        "l2_side lookups do not sum to l2.lookups");
  check(r.l2_side.fetch_misses + r.l2_side.data_misses == r.l2.misses,
        "l2_side misses do not sum to l2.misses");
  check(r.walk_memory_accesses >= r.walks && r.walk_memory_accesses <= 3 * r.walks,
        "walk_memory_accesses outside [walks, 3*walks]");
}

DerivedMetrics compute_derived(const StatsReport& r) {
  DerivedMetrics d;
  d.itlb_mpki = mpki(r.itlb.misses, r.instructions);
  d.dtlb_mpki = mpki(r.dtlb.misses, r.instructions);
  d.l1_combined_mpki = mpki(r.itlb.misses + r.dtlb.misses, r.instructions);
  d.l2_mpki = mpki(r.l2.misses, r.instructions);
  d.cpi = round3(static_cast<double>(r.total_cycles) / static_cast<double>(r.instructions));
  return d;
}

std::string emit_report(const StatsReport& report, ReportFormat format) {
  check_consistency(report);
  DerivedMetrics derived;
  try {
    derived = compute_derived(report);
  } catch (const Error& e) {
    throw Error(ErrorCode::InternalConsistency,
                std::string("cannot emit report: ") + e.what());
  }
  const ordered_json j = report_json(report, derived);
  if (format == ReportFormat::Json) return j.dump(2) + "\n";

  std::vector<std::pair<std::string, std::string>> cells;
  flatten(j, "", cells);
  std::ostringstream os;
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i].first;
  os << "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i].second;
  os << "\n";
  return os.str();
}

StatsReport parse_report_json(std::string_view text) {
  try {
    const ordered_json j = ordered_json::parse(text);
    StatsReport r;
    r.itlb = structure_from(j.at("itlb"));
    r.dtlb = structure_from(j.at("dtlb"));
    r.superpage = structure_from(j.at("superpage"));
    r.l2 = structure_from(j.at("l2"));
    r.l2_present = j.at("l2_present").get<bool>();
    const auto& side = j.at("l2_side");
    r.l2_side.fetch_lookups = side.at("fetch_lookups").get<std::uint64_t>();
    r.l2_side.fetch_misses = side.at("fetch_misses").get<std::uint64_t>();
    r.l2_side.data_lookups = side.at("data_lookups").get<std::uint64_t>();
    r.l2_side.data_misses = side.at("data_misses").get<std::uint64_t>();
    r.walks = j.at("walks").get<std::uint64_t>();
    r.walk_memory_accesses = j.at("walk_memory_accesses").get<std::uint64_t>();
    r.permission_faults = j.at("permission_faults").get<std::uint64_t>();
    r.instructions = j.at("instructions").get<std::uint64_t>();
    r.total_cycles = j.at("total_cycles").get<std::uint64_t>();
    const auto& d = j.at("derived");
    r.derived.itlb_mpki = d.at("itlb_mpki").get<double>();
    r.derived.dtlb_mpki = d.at("dtlb_mpki").get<double>();
    r.derived.l1_combined_mpki = d.at("l1_combined_mpki").get<double>();
    r.derived.l2_mpki = d.at("l2_mpki").get<double>();
    r.derived.cpi = d.at("cpi").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed report JSON: ") + e.what());
  }
}

}  // namespace tlbsim
