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

#include "tlbsim/tlbsim.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <string_view>

#include "tlbsim/config.hpp"
#include "tlbsim/error.hpp"
#include "tlbsim/mmu.hpp"
#include "tlbsim/runner.hpp"

struct tlbsim_config {
  tlbsim::RunConfig value;
};

struct tlbsim_sim {
  tlbsim::Mmu mmu;
};

struct tlbsim_report {
  tlbsim::StatsReport value;
};

namespace {

thread_local std::string g_last_error;

tlbsim_status status_for(tlbsim::ErrorCode code) {
  using tlbsim::ErrorCode;
  switch (code) {
    case ErrorCode::Canonicality: return TLBSIM_ERR_CANONICALITY;
    case ErrorCode::Alignment: return TLBSIM_ERR_ALIGNMENT;
    case ErrorCode::PageFault: return TLBSIM_ERR_PAGE_FAULT;
    case ErrorCode::MappingConflict: return TLBSIM_ERR_MAPPING_CONFLICT;
    case ErrorCode::Parse: return TLBSIM_ERR_PARSE;
    case ErrorCode::Config: return TLBSIM_ERR_CONFIG;
    case ErrorCode::UndefinedMetric: return TLBSIM_ERR_UNDEFINED_METRIC;
    case ErrorCode::InternalConsistency: return TLBSIM_ERR_INTERNAL_CONSISTENCY;
    case ErrorCode::Io: return TLBSIM_ERR_IO;
  }
  return TLBSIM_ERR_INTERNAL;
}

tlbsim_status fail(tlbsim_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
tlbsim_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return TLBSIM_OK;
  } catch (const tlbsim::Error& e) {
    return fail(status_for(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TLBSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TLBSIM_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tlbsim::ReportFormat report_format(tlbsim_format f) {
  switch (f) {
    case TLBSIM_FORMAT_JSON: return tlbsim::ReportFormat::Json;
    case TLBSIM_FORMAT_CSV: return tlbsim::ReportFormat::Csv;
    default: break;
  }
  throw tlbsim::Error(tlbsim::ErrorCode::Config, "format: reports support json or csv only");
}

tlbsim::AccessKind access_kind(tlbsim_access_kind k) {
  switch (k) {
    case TLBSIM_FETCH: return tlbsim::AccessKind::Fetch;
    case TLBSIM_LOAD: return tlbsim::AccessKind::Load;
    case TLBSIM_STORE: return tlbsim::AccessKind::Store;
  }
  throw tlbsim::Error(tlbsim::ErrorCode::Config, "unknown access kind");
}

tlbsim_translation to_c(const tlbsim::TranslationResult& r) {
  tlbsim_translation t{};
  t.pa = r.pa.value;
  t.source = static_cast<tlbsim_source>(r.source);
  t.cycles = r.cycles;
  t.walk_accesses = r.walk_accesses;
  t.permission_fault = r.permission_fault ? 1 : 0;
  return t;
}

bool lookup_counter(const tlbsim::StatsReport& r, std::string_view key, double& out) {
  const auto structure = [&](std::string_view prefix,
                             const tlbsim::StructureCounters& c) -> bool {
    if (key.size() <= prefix.size() + 1 || key.substr(0, prefix.size()) != prefix ||
        key[prefix.size()] != '.') {
      return false;
    }
    const std::string_view field = key.substr(prefix.size() + 1);
    const std::uint64_t* v = nullptr;
    if (field == "lookups") v = &c.lookups;
    if (field == "hits") v = &c.hits;
    if (field == "misses") v = &c.misses;
    if (field == "refills") v = &c.refills;
    if (field == "evictions") v = &c.evictions;
    if (field == "flushed_entries") v = &c.flushed_entries;
    if (v == nullptr) return false;
    out = static_cast<double>(*v);
    return true;
  };
  if (structure("itlb", r.itlb) || structure("dtlb", r.dtlb) ||
      structure("superpage", r.superpage) || structure("l2", r.l2)) {
    return true;
  }
  const struct {
    std::string_view name;
    std::uint64_t value;
  } scalars[] = {
      {"l2_side.fetch_lookups", r.l2_side.fetch_lookups},
      {"l2_side.fetch_misses", r.l2_side.fetch_misses},
      {"l2_side.data_lookups", r.l2_side.data_lookups},
      {"l2_side.data_misses", r.l2_side.data_misses},
      {"l2_present", r.l2_present ? 1u : 0u},
      {"walks", r.walks},
      {"walk_memory_accesses", r.walk_memory_accesses},
      {"permission_faults", r.permission_faults},
      {"instructions", r.instructions},
      {"total_cycles", r.total_cycles},
  };
  for (const auto& s : scalars) {
    if (key == s.name) {
      out = static_cast<double>(s.value);
      return true;
    }
  }
  if (key.substr(0, 8) == "derived.") {
    const tlbsim::DerivedMetrics d = tlbsim::compute_derived(r);
    const std::string_view f = key.substr(8);
    if (f == "itlb_mpki") out = d.itlb_mpki;
    else if (f == "dtlb_mpki") out = d.dtlb_mpki;
    else if (f == "l1_combined_mpki") out = d.l1_combined_mpki;
    else if (f == "l2_mpki") out = d.l2_mpki;
    else if (f == "cpi") out = d.cpi;
    else return false;
    return true;
  }
  return false;
}

void set_trace(tlbsim::RunConfig& cfg,
               std::variant<std::monostate, std::string, tlbsim::TraceSpec> trace, bool replace,
               bool seed_explicit) {
  if (!replace && !std::holds_alternative<std::monostate>(cfg.trace)) {
    throw tlbsim::Error(tlbsim::ErrorCode::Config,
                        "trace: configuration already names a trace; give exactly one");
  }
  cfg.trace = std::move(trace);
  cfg.trace_seed_explicit = seed_explicit;
  cfg.reseed(cfg.seed);
}

}  // namespace

#define TLBSIM_REQUIRE(cond, what)                                       \
  do {                                                                   \
    if (!(cond)) return fail(TLBSIM_ERR_INVALID_ARGUMENT, (what));      \
  } while (0)

extern "C" {

const char* tlbsim_last_error(void) { return g_last_error.c_str(); }

const char* tlbsim_status_name(tlbsim_status status) {
  switch (status) {
    case TLBSIM_OK: return "ok";
    case TLBSIM_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case TLBSIM_ERR_CANONICALITY: return "CanonicalityError";
    case TLBSIM_ERR_ALIGNMENT: return "AlignmentError";
    case TLBSIM_ERR_PAGE_FAULT: return "PageFault";
    case TLBSIM_ERR_MAPPING_CONFLICT: return "MappingConflict";
    case TLBSIM_ERR_PARSE: return "ParseError";
    case TLBSIM_ERR_CONFIG: return "ConfigError";
    case TLBSIM_ERR_UNDEFINED_METRIC: return "UndefinedMetric";
    case TLBSIM_ERR_INTERNAL_CONSISTENCY: return "InternalConsistencyError";
    case TLBSIM_ERR_IO: return "IoError";
    case TLBSIM_ERR_INTERNAL: return "InternalError";
  }
  return "unknown";
}

void tlbsim_string_free(char* str) { std::free(str); }

const char* tlbsim_version(void) { return "1.0.0"; }

tlbsim_status tlbsim_config_load(const char* path, tlbsim_config** out) {
  TLBSIM_REQUIRE(path && out, "tlbsim_config_load: null argument");
  return guarded([&] { *out = new tlbsim_config{tlbsim::load_config(path)}; });
}

tlbsim_status tlbsim_config_parse(const char* json_text, const char* base_dir,
                                  tlbsim_config** out) {
  TLBSIM_REQUIRE(json_text && out, "tlbsim_config_parse: null argument");
  return guarded([&] {
    *out = new tlbsim_config{tlbsim::parse_config(json_text, base_dir ? base_dir : "")};
  });
}

tlbsim_status tlbsim_config_from_preset(const char* name, tlbsim_config** out) {
  TLBSIM_REQUIRE(name && out, "tlbsim_config_from_preset: null argument");
  return guarded([&] { *out = new tlbsim_config{tlbsim::config_from_preset(name)}; });
}

tlbsim_status tlbsim_config_set_trace_file(tlbsim_config* config, const char* path, int replace) {
  TLBSIM_REQUIRE(config && path, "tlbsim_config_set_trace_file: null argument");
  return guarded([&] { set_trace(config->value, std::string(path), replace != 0, false); });
}

tlbsim_status tlbsim_config_set_trace_spec(tlbsim_config* config, const char* spec_json,
                                           int replace) {
  TLBSIM_REQUIRE(config && spec_json, "tlbsim_config_set_trace_spec: null argument");
  return guarded([&] {
    bool explicit_seed = false;
    tlbsim::TraceSpec spec = tlbsim::parse_trace_spec(spec_json, &explicit_seed);
    set_trace(config->value, std::move(spec), replace != 0, explicit_seed);
  });
}

tlbsim_status tlbsim_config_set_seed(tlbsim_config* config, uint64_t seed) {
  TLBSIM_REQUIRE(config, "tlbsim_config_set_seed: null config");
  return guarded([&] { config->value.reseed(seed); });
}

tlbsim_status tlbsim_config_set_output(tlbsim_config* config, const char* path,
                                       tlbsim_format format) {
  TLBSIM_REQUIRE(config, "tlbsim_config_set_output: null config");
  return guarded([&] {
    config->value.format = report_format(format);
    if (path) {
      config->value.output_path = std::string(path);
    } else {
      config->value.output_path.reset();
    }
  });
}

tlbsim_status tlbsim_config_set_format(tlbsim_config* config, tlbsim_format format) {
  TLBSIM_REQUIRE(config, "tlbsim_config_set_format: null config");
  return guarded([&] { config->value.format = report_format(format); });
}

tlbsim_status tlbsim_config_get_format(const tlbsim_config* config, tlbsim_format* out) {
  TLBSIM_REQUIRE(config && out, "tlbsim_config_get_format: null argument");
  *out = config->value.format == tlbsim::ReportFormat::Csv ? TLBSIM_FORMAT_CSV : TLBSIM_FORMAT_JSON;
  return TLBSIM_OK;
}

void tlbsim_config_free(tlbsim_config* config) { delete config; }

tlbsim_status tlbsim_run(const tlbsim_config* config, tlbsim_report** out) {
  TLBSIM_REQUIRE(config && out, "tlbsim_run: null argument");
  return guarded([&] { *out = new tlbsim_report{tlbsim::run(config->value)}; });
}

tlbsim_status tlbsim_report_emit(const tlbsim_report* report, tlbsim_format format,
                                 char** out_text) {
  TLBSIM_REQUIRE(report && out_text, "tlbsim_report_emit: null argument");
  return guarded([&] {
    *out_text = dup_string(tlbsim::emit_report(report->value, report_format(format)));
  });
}

tlbsim_status tlbsim_report_get(const tlbsim_report* report, const char* key, double* out) {
  TLBSIM_REQUIRE(report && key && out, "tlbsim_report_get: null argument");
  return guarded([&] {
    if (!lookup_counter(report->value, key, *out)) {
      throw tlbsim::Error(tlbsim::ErrorCode::Config, std::string("unknown report key: ") + key);
    }
  });
}

void tlbsim_report_free(tlbsim_report* report) { delete report; }

tlbsim_status tlbsim_sweep_file(const char* path, const uint64_t* seed_override,
                                const char* trace_override, tlbsim_format format,
                                char** out_text) {
  TLBSIM_REQUIRE(path && out_text, "tlbsim_sweep_file: null argument");
  return guarded([&] {
    tlbsim::SweepConfig sc = tlbsim::load_sweep_config(path);
    if (trace_override) set_trace(sc.base, std::string(trace_override), true, false);
    if (seed_override) sc.base.reseed(*seed_override);
    const tlbsim::SweepResult result = tlbsim::sweep(sc);
    *out_text = dup_string(tlbsim::emit_sweep(result, report_format(format)));
  });
}

tlbsim_status tlbsim_presets_describe(tlbsim_format format, char** out_text) {
  TLBSIM_REQUIRE(out_text, "tlbsim_presets_describe: null argument");
  return guarded([&] {
    const tlbsim::PresetFormat pf = format == TLBSIM_FORMAT_JSON  ? tlbsim::PresetFormat::Json
                                    : format == TLBSIM_FORMAT_CSV ? tlbsim::PresetFormat::Csv
                                                                  : tlbsim::PresetFormat::Text;
    *out_text = dup_string(tlbsim::describe_presets(pf));
  });
}

tlbsim_status tlbsim_generate_trace(const char* spec_json, const char* path,
                                    uint64_t* out_records) {
  TLBSIM_REQUIRE(spec_json && path, "tlbsim_generate_trace: null argument");
  return guarded([&] {
    const auto records = tlbsim::generate(tlbsim::parse_trace_spec(spec_json));
    tlbsim::write_trace(path, records);
    if (out_records) *out_records = records.size();
  });
}

tlbsim_status tlbsim_sim_create(const tlbsim_config* config, tlbsim_sim** out) {
  TLBSIM_REQUIRE(config && out, "tlbsim_sim_create: null argument");
  return guarded([&] {
    *out = new tlbsim_sim{tlbsim::make_mmu(config->value.mmu, config->value.mappings)};
  });
}

tlbsim_status tlbsim_sim_translate(tlbsim_sim* sim, uint64_t va, tlbsim_access_kind kind,
                                   tlbsim_translation* out) {
  TLBSIM_REQUIRE(sim && out, "tlbsim_sim_translate: null argument");
  return guarded([&] { *out = to_c(sim->mmu.translate(tlbsim::VirtAddr{va}, access_kind(kind))); });
}

tlbsim_status tlbsim_sim_step(tlbsim_sim* sim, uint64_t pc, int has_data,
                              tlbsim_access_kind data_kind, uint64_t data_va,
                              tlbsim_step_result* out) {
  TLBSIM_REQUIRE(sim && out, "tlbsim_sim_step: null argument");
  return guarded([&] {
    tlbsim::AccessRecord rec{tlbsim::VirtAddr{pc}, std::nullopt};
    if (has_data) {
      const tlbsim::AccessKind kind = access_kind(data_kind);
      if (kind == tlbsim::AccessKind::Fetch) {
        throw tlbsim::Error(tlbsim::ErrorCode::Config, "data access must be a load or store");
      }
      rec.data = tlbsim::DataAccess{kind, tlbsim::VirtAddr{data_va}};
    }
    const tlbsim::StepOutcome step = sim->mmu.step(rec);
    *out = tlbsim_step_result{};
    out->fetch = to_c(step.fetch);
    out->has_data = step.data ? 1 : 0;
    if (step.data) out->data = to_c(*step.data);
    out->cycles = step.cycles;
  });
}

tlbsim_status tlbsim_sim_sfence(tlbsim_sim* sim, const uint64_t* va) {
  TLBSIM_REQUIRE(sim, "tlbsim_sim_sfence: null sim");
  return guarded([&] {
    if (va) {
      sim->mmu.sfence(tlbsim::VirtAddr{*va});
    } else {
      sim->mmu.sfence();
    }
  });
}

tlbsim_status tlbsim_sim_oracle(const tlbsim_sim* sim, uint64_t va, uint64_t* out_pa) {
  TLBSIM_REQUIRE(sim && out_pa, "tlbsim_sim_oracle: null argument");
  return guarded(
      [&] { *out_pa = sim->mmu.page_table().translate_oracle(tlbsim::VirtAddr{va}).value; });
}

tlbsim_status tlbsim_sim_map(tlbsim_sim* sim, uint64_t va, uint64_t page_bytes,
                             uint64_t* out_ppn) {
  TLBSIM_REQUIRE(sim, "tlbsim_sim_map: null sim");
  return guarded([&] {
    tlbsim::PageSize size;
    if (page_bytes == tlbsim::byte_size(tlbsim::PageSize::Base4K)) {
      size = tlbsim::PageSize::Base4K;
    } else if (page_bytes == tlbsim::byte_size(tlbsim::PageSize::Mega2M)) {
      size = tlbsim::PageSize::Mega2M;
    } else if (page_bytes == tlbsim::byte_size(tlbsim::PageSize::Giga1G)) {
      size = tlbsim::PageSize::Giga1G;
    } else {
      throw tlbsim::Error(tlbsim::ErrorCode::Config, "page size must be 4K, 2M or 1G");
    }
    const std::uint64_t ppn =
        sim->mmu.page_table().map_page(tlbsim::split_vpn(tlbsim::VirtAddr{va}), size);
    if (out_ppn) *out_ppn = ppn;
  });
}

tlbsim_status tlbsim_sim_occupancy(const tlbsim_sim* sim, int structure, uint64_t* out) {
  TLBSIM_REQUIRE(sim && out, "tlbsim_sim_occupancy: null argument");
  switch (structure) {
    case 0: *out = sim->mmu.itlb().occupancy(); return TLBSIM_OK;
    case 1: *out = sim->mmu.dtlb().occupancy(); return TLBSIM_OK;
    case 2: *out = sim->mmu.superpage().occupancy(); return TLBSIM_OK;
    case 3: *out = sim->mmu.l2() ? sim->mmu.l2()->occupancy() : 0; return TLBSIM_OK;
    default: break;
  }
  return fail(TLBSIM_ERR_INVALID_ARGUMENT, "tlbsim_sim_occupancy: structure must be 0..3");
}

tlbsim_status tlbsim_sim_report(const tlbsim_sim* sim, tlbsim_report** out) {
  TLBSIM_REQUIRE(sim && out, "tlbsim_sim_report: null argument");
  return guarded([&] { *out = new tlbsim_report{sim->mmu.report()}; });
}

void tlbsim_sim_free(tlbsim_sim* sim) { delete sim; }

}  // extern "C"
