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

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "tlbsim/tlbsim.h"

extern "C" int tlbsim_c_header_smoke(void);

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  tlbsim_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("header compiles as C and works from C") { CHECK(tlbsim_c_header_smoke() == 0); }

TEST_CASE("status names and errors") {
  CHECK(std::string(tlbsim_status_name(TLBSIM_OK)) == "ok");
  CHECK(std::string(tlbsim_status_name(TLBSIM_ERR_CONFIG)) == "ConfigError");
  tlbsim_config* cfg = nullptr;
  CHECK(tlbsim_config_from_preset("nope", &cfg) == TLBSIM_ERR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::strstr(tlbsim_last_error(), "nope") != nullptr);
  CHECK(tlbsim_config_parse(R"({"l2":{"sets":3}})", nullptr, &cfg) == TLBSIM_ERR_CONFIG);
  CHECK(tlbsim_config_parse("{", nullptr, &cfg) == TLBSIM_ERR_CONFIG);
  CHECK(tlbsim_config_load("/nonexistent/x.json", &cfg) == TLBSIM_ERR_IO);
  CHECK(tlbsim_config_from_preset(nullptr, &cfg) == TLBSIM_ERR_INVALID_ARGUMENT);
  CHECK(tlbsim_run(nullptr, nullptr) == TLBSIM_ERR_INVALID_ARGUMENT);
  CHECK(std::string(tlbsim_version()).size() > 0);
}

TEST_CASE("run through the C API") {
  tlbsim_config* cfg = nullptr;
  REQUIRE(tlbsim_config_from_preset("II", &cfg) == TLBSIM_OK);
  CHECK(tlbsim_config_set_trace_spec(
            cfg, R"({"generator":"uniform_random","working_set_pages":512,"length":5000})", 0) ==
        TLBSIM_OK);
  CHECK(tlbsim_config_set_trace_file(cfg, "x", 0) == TLBSIM_ERR_CONFIG);
  CHECK(tlbsim_config_set_seed(cfg, 3) == TLBSIM_OK);

  tlbsim_report* rep = nullptr;
  REQUIRE(tlbsim_run(cfg, &rep) == TLBSIM_OK);
  double v = 0, l1 = 0, d = 0;
  REQUIRE(tlbsim_report_get(rep, "instructions", &v) == TLBSIM_OK);
  CHECK(v == 5000);
  REQUIRE(tlbsim_report_get(rep, "l2.lookups", &v) == TLBSIM_OK);
  REQUIRE(tlbsim_report_get(rep, "itlb.misses", &l1) == TLBSIM_OK);
  REQUIRE(tlbsim_report_get(rep, "dtlb.misses", &d) == TLBSIM_OK);
  CHECK(v == l1 + d);
  REQUIRE(tlbsim_report_get(rep, "derived.l2_mpki", &v) == TLBSIM_OK);
  CHECK(v > 0);
  CHECK(tlbsim_report_get(rep, "l2.colour", &v) == TLBSIM_ERR_CONFIG);

  char* json = nullptr;
  REQUIRE(tlbsim_report_emit(rep, TLBSIM_FORMAT_JSON, &json) == TLBSIM_OK);
  const std::string first = take(json);
  CHECK(first.find("\"latency-model CPI\"") != std::string::npos);
  char* csv = nullptr;
  REQUIRE(tlbsim_report_emit(rep, TLBSIM_FORMAT_CSV, &csv) == TLBSIM_OK);
  CHECK(take(csv).find("l2.misses") != std::string::npos);
  CHECK(tlbsim_report_emit(rep, TLBSIM_FORMAT_TEXT, &csv) == TLBSIM_ERR_CONFIG);
  tlbsim_report_free(rep);

  REQUIRE(tlbsim_run(cfg, &rep) == TLBSIM_OK);
  REQUIRE(tlbsim_report_emit(rep, TLBSIM_FORMAT_JSON, &json) == TLBSIM_OK);
  CHECK(take(json) == first);
  tlbsim_report_free(rep);
  tlbsim_config_free(cfg);
}

TEST_CASE("step-by-step simulator handle") {
  tlbsim_config* cfg = nullptr;
  REQUIRE(tlbsim_config_from_preset("II", &cfg) == TLBSIM_OK);
  tlbsim_sim* sim = nullptr;
  REQUIRE(tlbsim_sim_create(cfg, &sim) == TLBSIM_OK);
  tlbsim_config_free(cfg);

  tlbsim_translation t{};
  REQUIRE(tlbsim_sim_translate(sim, 0x5000, TLBSIM_LOAD, &t) == TLBSIM_OK);
  CHECK(t.source == TLBSIM_SOURCE_WALK);
  CHECK(t.cycles == 63);
  CHECK(t.walk_accesses == 3);
  std::uint64_t pa = 0;
  REQUIRE(tlbsim_sim_oracle(sim, 0x5000, &pa) == TLBSIM_OK);
  CHECK(pa == t.pa);

  std::uint64_t ppn = 0;
  REQUIRE(tlbsim_sim_map(sim, 0x4000'0000, 1ull << 30, &ppn) == TLBSIM_OK);
  REQUIRE(tlbsim_sim_translate(sim, 0x4000'0010, TLBSIM_LOAD, &t) == TLBSIM_OK);
  CHECK(t.walk_accesses == 1);
  CHECK(t.pa == (ppn << 12) + 0x10);
  CHECK(tlbsim_sim_map(sim, 0x4000'1000, 4096, nullptr) == TLBSIM_ERR_MAPPING_CONFLICT);
  CHECK(tlbsim_sim_map(sim, 0x1000, 12345, nullptr) == TLBSIM_ERR_CONFIG);

  tlbsim_step_result s{};
  REQUIRE(tlbsim_sim_step(sim, 0x5000, 1, TLBSIM_STORE, 0x4000'0020, &s) == TLBSIM_OK);
  CHECK(s.has_data == 1);
  CHECK(s.fetch.source == TLBSIM_SOURCE_L2);
  CHECK(s.data.source == TLBSIM_SOURCE_SUPERPAGE);
  CHECK(s.cycles == 1 + 3 + 1);
  CHECK(tlbsim_sim_step(sim, 0x5000, 1, TLBSIM_FETCH, 0, &s) == TLBSIM_ERR_CONFIG);
  CHECK(tlbsim_sim_translate(sim, 0x40'0000'0000ull, TLBSIM_LOAD, &t) == TLBSIM_ERR_CANONICALITY);

  std::uint64_t occ = 0;
  REQUIRE(tlbsim_sim_occupancy(sim, 3, &occ) == TLBSIM_OK);
  CHECK(occ == 1);
  const std::uint64_t va = 0x5000;
  REQUIRE(tlbsim_sim_sfence(sim, &va) == TLBSIM_OK);
  REQUIRE(tlbsim_sim_occupancy(sim, 3, &occ) == TLBSIM_OK);
  CHECK(occ == 0);
  REQUIRE(tlbsim_sim_sfence(sim, nullptr) == TLBSIM_OK);
  for (int k = 0; k < 4; ++k) {
    REQUIRE(tlbsim_sim_occupancy(sim, k, &occ) == TLBSIM_OK);
    CHECK(occ == 0);
  }
  CHECK(tlbsim_sim_occupancy(sim, 9, &occ) == TLBSIM_ERR_INVALID_ARGUMENT);

  tlbsim_report* rep = nullptr;
  REQUIRE(tlbsim_sim_report(sim, &rep) == TLBSIM_OK);
  double walks = 0;
  REQUIRE(tlbsim_report_get(rep, "walks", &walks) == TLBSIM_OK);
  CHECK(walks == 2);
  tlbsim_report_free(rep);
  tlbsim_sim_free(sim);
}

TEST_CASE("demand paging off surfaces page faults") {
  tlbsim_config* cfg = nullptr;
  REQUIRE(tlbsim_config_parse(R"({"demand_paging":false})", "", &cfg) == TLBSIM_OK);
  tlbsim_sim* sim = nullptr;
  REQUIRE(tlbsim_sim_create(cfg, &sim) == TLBSIM_OK);
  tlbsim_translation t{};
  CHECK(tlbsim_sim_translate(sim, 0x1000, TLBSIM_LOAD, &t) == TLBSIM_ERR_PAGE_FAULT);
  std::uint64_t pa = 0;
  CHECK(tlbsim_sim_oracle(sim, 0x1000, &pa) == TLBSIM_ERR_PAGE_FAULT);
  tlbsim_sim_free(sim);
  tlbsim_config_free(cfg);
}

TEST_CASE("presets, trace generation and sweeps") {
  char* text = nullptr;
  REQUIRE(tlbsim_presets_describe(TLBSIM_FORMAT_TEXT, &text) == TLBSIM_OK);
  CHECK(take(text).find("4MB") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "tlbsim_capi_test";
  std::filesystem::create_directories(dir);
  const std::string trace = (dir / "c.trace").string();
  std::uint64_t n = 0;
  REQUIRE(tlbsim_generate_trace(
              R"({"generator":"conflict","l2_sets":1024,"distinct_tags":4,"repetitions":50})",
              trace.c_str(), &n) == TLBSIM_OK);
  CHECK(n == 200);
  CHECK(tlbsim_generate_trace(R"({"generator":"nope"})", trace.c_str(), &n) == TLBSIM_ERR_CONFIG);

  const std::string sweep = (dir / "s.json").string();
  {
    FILE* f = std::fopen(sweep.c_str(), "w");
    std::fputs(R"({"preset":"V","dtlb":{"sets":128,"ways":1},"trace":"c.trace",
      "variants":[{"name":"dm","l2":{"ways":1}},{"name":"w4","l2":{"ways":4}}]})", f);
    std::fclose(f);
  }
  REQUIRE(tlbsim_sweep_file(sweep.c_str(), nullptr, nullptr, TLBSIM_FORMAT_CSV, &text) ==
          TLBSIM_OK);
  const std::string csv = take(text);
  CHECK(csv.find("\ndm,") != std::string::npos);
  CHECK(csv.find("\nw4,") != std::string::npos);
  const std::uint64_t seed = 9;
  REQUIRE(tlbsim_sweep_file(sweep.c_str(), &seed, trace.c_str(), TLBSIM_FORMAT_JSON, &text) ==
          TLBSIM_OK);
  CHECK(take(text).find("\"w4\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}
