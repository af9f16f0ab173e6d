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

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tlbsim/tlbsim.h"

namespace {

int report_failure(tlbsim_status status, const char* what) {
  std::cerr << "tlbsim: " << what << ": " << tlbsim_status_name(status) << ": "
            << tlbsim_last_error() << "\n";
  return static_cast<int>(status);
}

std::optional<tlbsim_format> parse_format(const std::string& name, bool allow_text) {
  if (name == "json") return TLBSIM_FORMAT_JSON;
  if (name == "csv") return TLBSIM_FORMAT_CSV;
  if (allow_text && name == "text") return TLBSIM_FORMAT_TEXT;
  return std::nullopt;
}

struct Owned {
  char* text = nullptr;
  ~Owned() { tlbsim_string_free(text); }
};

struct RunArgs {
  std::string config;
  std::string preset;
  std::string trace;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

int cmd_run(const RunArgs& a) {
  tlbsim_config* cfg = nullptr;
  tlbsim_status st = !a.config.empty() ? tlbsim_config_load(a.config.c_str(), &cfg)
                                       : tlbsim_config_from_preset(a.preset.c_str(), &cfg);
  if (st != TLBSIM_OK) return report_failure(st, "config");
  struct Guard {
    tlbsim_config* c;
    ~Guard() { tlbsim_config_free(c); }
  } guard{cfg};

  if (!a.trace.empty()) {
    st = tlbsim_config_set_trace_file(cfg, a.trace.c_str(), 1);
    if (st != TLBSIM_OK) return report_failure(st, "trace");
  }
  if (a.seed) {
    st = tlbsim_config_set_seed(cfg, *a.seed);
    if (st != TLBSIM_OK) return report_failure(st, "seed");
  }
  if (!a.format.empty()) {
    st = tlbsim_config_set_format(cfg, *parse_format(a.format, false));
    if (st != TLBSIM_OK) return report_failure(st, "format");
  }
  tlbsim_format fmt = TLBSIM_FORMAT_JSON;
  tlbsim_config_get_format(cfg, &fmt);
  if (!a.out.empty()) {
    st = tlbsim_config_set_output(cfg, a.out.c_str(), fmt);
    if (st != TLBSIM_OK) return report_failure(st, "output");
  }

  tlbsim_report* report = nullptr;
  st = tlbsim_run(cfg, &report);
  if (st != TLBSIM_OK) return report_failure(st, "run");
  Owned text;
  st = tlbsim_report_emit(report, fmt, &text.text);
  tlbsim_report_free(report);
  if (st != TLBSIM_OK) return report_failure(st, "report");
  if (a.out.empty()) std::fputs(text.text, stdout);
  return 0;
}

int cmd_sweep(const RunArgs& a) {
  const tlbsim_format fmt = a.format.empty() ? TLBSIM_FORMAT_CSV : *parse_format(a.format, false);
  const std::uint64_t seed = a.seed.value_or(0);
  Owned text;
  const tlbsim_status st =
      tlbsim_sweep_file(a.config.c_str(), a.seed ? &seed : nullptr,
                        a.trace.empty() ? nullptr : a.trace.c_str(), fmt, &text.text);
  if (st != TLBSIM_OK) return report_failure(st, "sweep");
  if (a.out.empty()) {
    std::fputs(text.text, stdout);
    return 0;
  }
  std::FILE* f = std::fopen(a.out.c_str(), "wb");
  if (f == nullptr) {
    std::cerr << "tlbsim: cannot write " << a.out << "\n";
    return static_cast<int>(TLBSIM_ERR_IO);
  }
  const bool ok = std::fputs(text.text, f) >= 0;
  if (std::fclose(f) != 0 || !ok) {
    std::cerr << "tlbsim: short write to " << a.out << "\n";
    return static_cast<int>(TLBSIM_ERR_IO);
  }
  return 0;
}

int cmd_presets(const std::string& format) {
  Owned text;
  const tlbsim_status st =
      tlbsim_presets_describe(format.empty() ? TLBSIM_FORMAT_TEXT : *parse_format(format, true),
                              &text.text);
  if (st != TLBSIM_OK) return report_failure(st, "presets");
  std::fputs(text.text, stdout);
  return 0;
}

struct GenArgs {
  std::string spec;
  std::string generator;
  std::optional<std::uint64_t> pages, stride_pages, count, working_set_pages, length, l2_sets,
      distinct_tags, repetitions, nodes, node_bytes, seed;
  bool fetch_only = false;
  std::string out;
};

int cmd_gen_trace(const GenArgs& a) {
  std::string spec = a.spec;
  if (spec.empty()) {
    nlohmann::ordered_json j;
    j["generator"] = a.generator;
    const auto put = [&](const char* key, const std::optional<std::uint64_t>& v) {
      if (v) j[key] = *v;
    };
    put("pages", a.pages);
    put("stride_pages", a.stride_pages);
    put("count", a.count);
    put("working_set_pages", a.working_set_pages);
    put("length", a.length);
    put("l2_sets", a.l2_sets);
    put("distinct_tags", a.distinct_tags);
    put("repetitions", a.repetitions);
    put("nodes", a.nodes);
    put("node_bytes", a.node_bytes);
    put("seed", a.seed);
    if (a.fetch_only) j["fetch_only"] = true;
    spec = j.dump();
  }
  std::uint64_t records = 0;
  const tlbsim_status st = tlbsim_generate_trace(spec.c_str(), a.out.c_str(), &records);
  if (st != TLBSIM_OK) return report_failure(st, "gen-trace");
  std::cerr << "wrote " << records << " records to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven Sv39 TLB hierarchy simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tlbsim_version()));

  const auto format_check = CLI::IsMember({"json", "csv"});

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Simulate one trace through one configuration");
  auto* run_config = run->add_option("--config", run_args.config, "JSON run configuration")
                         ->check(CLI::ExistingFile);
  auto* run_preset = run->add_option("--preset", run_args.preset, "Preset I, II, III, IV or V");
  run_config->excludes(run_preset);
  run->add_option("--trace", run_args.trace, "Trace file (plain or .gz); replaces the config trace");
  run->add_option("--seed", run_args.seed, "Run seed");
  run->add_option("--out", run_args.out, "Write the report here instead of stdout");
  run->add_option("--format", run_args.format, "json or csv")->check(format_check);

  RunArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "Compare configuration variants on one trace");
  sweep->add_option("--config", sweep_args.config, "JSON sweep configuration with variants")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--trace", sweep_args.trace, "Trace file; replaces the config trace");
  sweep->add_option("--seed", sweep_args.seed, "Run seed");
  sweep->add_option("--out", sweep_args.out, "Write the table here instead of stdout");
  sweep->add_option("--format", sweep_args.format, "csv (default) or json")->check(format_check);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-trace", "Write a synthetic trace");
  auto* gen_spec = gen->add_option("--spec", gen_args.spec, "Generator as a JSON object");
  auto* gen_name = gen->add_option("--generator", gen_args.generator,
                                   "sequential, strided, uniform_random, conflict, pointer_chase")
                       ->check(CLI::IsMember(
                           {"sequential", "strided", "uniform_random", "conflict", "pointer_chase"}));
  gen_spec->excludes(gen_name);
  gen->add_option("--pages", gen_args.pages);
  gen->add_option("--stride-pages", gen_args.stride_pages);
  gen->add_option("--count", gen_args.count);
  gen->add_option("--working-set-pages", gen_args.working_set_pages);
  gen->add_option("--length", gen_args.length);
  gen->add_option("--l2-sets", gen_args.l2_sets);
  gen->add_option("--distinct-tags", gen_args.distinct_tags);
  gen->add_option("--repetitions", gen_args.repetitions);
  gen->add_option("--nodes", gen_args.nodes);
  gen->add_option("--node-bytes", gen_args.node_bytes);
  gen->add_option("--seed", gen_args.seed);
  gen->add_flag("--fetch-only", gen_args.fetch_only, "Emit each address as an instruction fetch");
  gen->add_option("--out", gen_args.out, "Output path; .gz compresses")->required();

  std::string presets_format;
  CLI::App* presets = app.add_subcommand("presets", "Print the built-in configurations");
  presets->add_option("--format", presets_format, "text (default), json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (run_args.config.empty() && run_args.preset.empty()) {
      std::cerr << "tlbsim run: one of --config or --preset is required\n";
      return static_cast<int>(TLBSIM_ERR_INVALID_ARGUMENT);
    }
    return cmd_run(run_args);
  }
  if (sweep->parsed()) return cmd_sweep(sweep_args);
  if (gen->parsed()) {
    if (gen_args.spec.empty() && gen_args.generator.empty()) {
      std::cerr << "tlbsim gen-trace: one of --spec or --generator is required\n";
      return static_cast<int>(TLBSIM_ERR_INVALID_ARGUMENT);
    }
    return cmd_gen_trace(gen_args);
  }
  return cmd_presets(presets_format);
}
