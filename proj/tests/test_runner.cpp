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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "tlbsim/config.hpp"
#include "tlbsim/error.hpp"
#include "tlbsim/runner.hpp"

using namespace tlbsim;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("preset I leaves L2 counters at zero") {
  RunConfig c = config_from_preset("I");
  c.trace = TraceSpec{UniformRandomSpec{4096, 20000, 1}};
  const StatsReport r = run(c);
  CHECK_FALSE(r.l2_present);
  CHECK(r.l2 == StructureCounters{});
  CHECK(r.l2_side == L2SideCounters{});
  CHECK(r.walks == r.itlb.misses + r.dtlb.misses);
}

TEST_CASE("cold fetch-only sequential trace misses once per code page") {
  RunConfig c = config_from_preset("II");
  c.trace = TraceSpec{SequentialSpec{100}, true};
  const StatsReport r = run(c);
  CHECK(r.instructions == 100);
  CHECK(r.itlb.misses == 100);
  CHECK(r.dtlb.lookups == 0);
}

TEST_CASE("runs are deterministic, including random replacement") {
  RunConfig c = parse_config(R"({"preset":"IV","dtlb":{"policy":"random"},"seed":5,
      "trace":{"generator":"pointer_chase","nodes":20000,"length":30000}})");
  const std::string a = emit_report(run(c), ReportFormat::Json);
  const std::string b = emit_report(run(c), ReportFormat::Json);
  CHECK(a == b);
  c.reseed(6);
  CHECK(emit_report(run(c), ReportFormat::Json) != a);
}

TEST_CASE("run writes the configured output") {
  const auto dir = std::filesystem::temp_directory_path() / "tlbsim_runner_test";
  std::filesystem::create_directories(dir);
  const auto trace_path = dir / "t.trace.gz";
  write_trace(trace_path.string(), generate(TraceSpec{UniformRandomSpec{300, 2000, 1}}));

  RunConfig c = config_from_preset("III");
  c.trace = trace_path.string();
  c.output_path = (dir / "r.csv").string();
  c.format = ReportFormat::Csv;
  const StatsReport r = run(c);
  CHECK(slurp(dir / "r.csv") == emit_report(r, ReportFormat::Csv));
  // streaming from file matches simulating the materialized trace
  CHECK(r == simulate(c.mmu, {}, read_trace(trace_path.string())));

  c.output_path = (dir / "missing" / "r.csv").string();
  CHECK_THROWS_AS(run(c), Error);
  std::filesystem::remove_all(dir);

  RunConfig none = config_from_preset("I");
  CHECK_THROWS_AS(run(none), Error);
}

TEST_CASE("mapping preload serves a region with superpages") {
  RunConfig c = parse_config(R"({"preset":"II",
      "mappings":[{"base":"0x40000000","size":"1G"}],
      "trace":{"generator":"uniform_random","working_set_pages":4096,"length":5000}})");
  const StatsReport r = run(c);
  // 4096 data pages at 0x40000000 lie in one 1GB page
  CHECK(r.dtlb.misses == 1);
  CHECK(r.superpage.refills == 1);
  CHECK(r.walk_memory_accesses == r.walks * 3 - 2);
}

TEST_CASE("sweep over L2 associativity") {
  SweepConfig s = parse_sweep_config(R"({
    "preset":"V", "dtlb":{"sets":128,"ways":1},
    "trace":{"generator":"conflict","l2_sets":1024,"distinct_tags":4,"repetitions":1000},
    "variants":[{"name":"dm","l2":{"ways":1}},{"name":"4-way","l2":{"ways":4}},
                {"name":"8-way","l2":{"ways":8}}]
  })");
  const SweepResult res = sweep(s);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].name == "dm");
  CHECK(res.rows[0].l2_data_miss_reduction_pct == 0.0);
  CHECK(res.rows[0].report.l2_side.data_misses == 4000);
  CHECK(res.rows[1].report.l2_side.data_misses == 4);
  CHECK(res.rows[2].report.l2_side.data_misses <= res.rows[1].report.l2_side.data_misses);
  CHECK(*res.rows[1].l2_data_miss_reduction_pct == doctest::Approx(99.9));

  const auto j = nlohmann::json::parse(emit_sweep(res, ReportFormat::Json));
  CHECK(j["variants"].size() == 3);
  CHECK(j["variants"][1]["l2"]["organization"] == "4-way");
  CHECK(j["variants"][0]["l2"]["organization"] == "direct-mapped");
  CHECK(j["variants"][2]["report"]["l2"]["misses"] == res.rows[2].report.l2.misses);

  std::istringstream csv(emit_sweep(res, ReportFormat::Csv));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 4);

  // identical to running each variant alone on the same trace
  const auto trace = load_trace(s.base);
  for (const SweepRow& row : res.rows) CHECK(simulate(row.mmu, {}, trace) == row.report);
  CHECK(emit_sweep(sweep(s), ReportFormat::Json) == emit_sweep(res, ReportFormat::Json));
}

TEST_CASE("sweep reductions are empty for a zero baseline") {
  SweepConfig s = parse_sweep_config(R"({
    "trace":{"generator":"sequential","pages":4},
    "variants":[{"name":"a","preset":"I"},{"name":"b","preset":"II"}]
  })");
  const SweepResult res = sweep(s);
  CHECK_FALSE(res.rows[1].l2_miss_reduction_pct.has_value());
  CHECK(res.rows[1].walk_reduction_pct == 0.0);
  SweepConfig one = s;
  one.variants.pop_back();
  CHECK_THROWS_AS(sweep(one), Error);
}

TEST_CASE("presets description lists reach") {
  const std::string text = describe_presets(PresetFormat::Text);
  for (const char* s : {"128KB", "512KB", "2MB", "256KB", "4MB", "fully-assoc.", "8-way"}) {
    CHECK(text.find(s) != std::string::npos);
  }
  const auto j = nlohmann::json::parse(describe_presets(PresetFormat::Json));
  CHECK(j.size() == 5);
  CHECK(j[3]["l2"]["reach"] == "4MB");
  CHECK(j[0]["l2"].is_null());
  const std::string csv = describe_presets(PresetFormat::Csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
