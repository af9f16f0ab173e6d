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

#include "tlbsim/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "tlbsim/error.hpp"

namespace tlbsim {

using json = nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::Config, key + ": " + why);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& context) {
  if (!obj.is_object()) config_fail(context.empty() ? "config" : context, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) {
      config_fail(context.empty() ? key : context + "." + key, "unknown key");
    }
  }
}

std::uint64_t as_u64(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) config_fail(key, "must be non-negative");
    return static_cast<std::uint64_t>(i);
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      std::size_t used = 0;
      const std::uint64_t out = std::stoull(s, &used, 0);
      if (used == s.size() && !s.empty()) return out;
    } catch (const std::exception&) {
    }
    config_fail(key, "expected an unsigned integer, got \"" + s + "\"");
  }
  config_fail(key, "expected an unsigned integer");
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) config_fail(key, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) config_fail(key, "expected a string");
  return v.get<std::string>();
}

ReplacementPolicy parse_policy(const json& v, const std::string& key) {
  const std::string s = as_string(v, key);
  if (s == "plru" || s == "pseudo_lru") return ReplacementPolicy::PseudoLru;
  if (s == "random") return ReplacementPolicy::Random;
  config_fail(key, "expected \"plru\" or \"random\", got \"" + s + "\"");
}

TlbGeometry parse_geometry(const json& j, const TlbGeometry& base, const std::string& key,
                           bool& seed_explicit) {
  reject_unknown(j, {"sets", "entries", "ways", "policy", "seed"}, key);
  TlbGeometry g = base;
  if (j.contains("ways")) g.ways = as_u64(j["ways"], key + ".ways");
  if (j.contains("sets") && j.contains("entries")) {
    config_fail(key, "give either sets or entries, not both");
  }
  std::uint64_t entries = base.entries();
  if (j.contains("sets")) {
    g.sets = as_u64(j["sets"], key + ".sets");
  } else {
    if (j.contains("entries")) entries = as_u64(j["entries"], key + ".entries");
    if (g.ways == 0 || entries % g.ways != 0 || entries < g.ways) {
      config_fail(key + ".entries", std::to_string(entries) + " is not a multiple of ways=" +
                                        std::to_string(g.ways));
    }
    g.sets = entries / g.ways;
  }
  if (j.contains("policy")) g.policy = parse_policy(j["policy"], key + ".policy");
  if (j.contains("seed")) {
    g.seed = as_u64(j["seed"], key + ".seed");
    seed_explicit = true;
  }
  g.validate(key.c_str());
  return g;
}

LatencyModel parse_latencies(const json& j, LatencyModel lat) {
  reject_unknown(j, {"l1_hit_cycles", "l2_extra_cycles", "mem_access_cycles"}, "latencies");
  if (j.contains("l1_hit_cycles")) lat.l1_hit_cycles = as_u64(j["l1_hit_cycles"], "latencies.l1_hit_cycles");
  if (j.contains("l2_extra_cycles")) lat.l2_extra_cycles = as_u64(j["l2_extra_cycles"], "latencies.l2_extra_cycles");
  if (j.contains("mem_access_cycles")) lat.mem_access_cycles = as_u64(j["mem_access_cycles"], "latencies.mem_access_cycles");
  lat.validate();
  return lat;
}

MmuConfig default_mmu() {
  MmuConfig mmu;
  mmu.itlb = TlbGeometry{1, 32, ReplacementPolicy::PseudoLru, 1};
  mmu.dtlb = TlbGeometry{1, 32, ReplacementPolicy::PseudoLru, 1};
  return mmu;
}

// Applies the MMU-shaping keys of `j` on top of `mmu`.
void apply_mmu_keys(const json& j, MmuConfig& mmu, ExplicitSeeds& seeds, std::string* preset,
                    const std::string& ctx) {
  const auto k = [&](const char* name) { return ctx.empty() ? std::string(name) : ctx + "." + name; };
  if (j.contains("preset")) {
    const std::string name = as_string(j["preset"], k("preset"));
    mmu = find_preset(name).mmu;
    seeds = {};
    if (preset) *preset = name;
  }
  if (j.contains("itlb")) mmu.itlb = parse_geometry(j["itlb"], mmu.itlb, k("itlb"), seeds[0]);
  if (j.contains("dtlb")) mmu.dtlb = parse_geometry(j["dtlb"], mmu.dtlb, k("dtlb"), seeds[1]);
  if (j.contains("l2")) {
    const json& l2 = j["l2"];
    if (l2.is_null()) {
      mmu.l2.reset();
      seeds[2] = false;
    } else {
      mmu.l2 = parse_geometry(l2, mmu.l2.value_or(TlbGeometry{}), k("l2"), seeds[2]);
    }
  }
  if (j.contains("superpage_entries")) {
    mmu.superpage_entries = as_u64(j["superpage_entries"], k("superpage_entries"));
  }
  if (j.contains("latencies")) mmu.latencies = parse_latencies(j["latencies"], mmu.latencies);
}

Mapping parse_mapping(const json& j, std::size_t i) {
  const std::string ctx = "mappings[" + std::to_string(i) + "]";
  reject_unknown(j, {"base", "size", "count"}, ctx);
  if (!j.contains("base")) config_fail(ctx + ".base", "required");
  if (!j.contains("size")) config_fail(ctx + ".size", "required");
  Mapping m;
  m.base = VirtAddr{as_u64(j["base"], ctx + ".base")};
  const std::string size = as_string(j["size"], ctx + ".size");
  const auto ps = parse_page_size(size.c_str());
  if (!ps) config_fail(ctx + ".size", "expected \"4K\", \"2M\" or \"1G\"");
  m.size = *ps;
  if (j.contains("count")) m.count = as_u64(j["count"], ctx + ".count");
  if (m.count < 1) config_fail(ctx + ".count", "must be >= 1");
  if (!m.base.canonical()) config_fail(ctx + ".base", "not a canonical Sv39 address");
  if (m.base.value % byte_size(m.size) != 0) {
    config_fail(ctx + ".base", std::string("not aligned to ") + page_size_name(m.size));
  }
  return m;
}

TraceSpec trace_spec_from(const json& j, bool& seed_explicit) {
  if (!j.is_object() || !j.contains("generator")) config_fail("trace.generator", "required");
  const std::string gen = as_string(j["generator"], "trace.generator");
  TraceSpec spec;
  const auto u = [&](const char* key, std::uint64_t dflt) {
    return j.contains(key) ? as_u64(j[key], std::string("trace.") + key) : dflt;
  };
  seed_explicit = j.contains("seed");
  if (gen == "sequential") {
    reject_unknown(j, {"generator", "fetch_only", "pages"}, "trace");
    spec.generator = SequentialSpec{u("pages", 1)};
  } else if (gen == "strided") {
    reject_unknown(j, {"generator", "fetch_only", "stride_pages", "count"}, "trace");
    spec.generator = StridedSpec{u("stride_pages", 1), u("count", 1)};
  } else if (gen == "uniform_random") {
    reject_unknown(j, {"generator", "fetch_only", "working_set_pages", "length", "seed"}, "trace");
    spec.generator = UniformRandomSpec{u("working_set_pages", 1), u("length", 1), u("seed", 1)};
  } else if (gen == "conflict") {
    reject_unknown(j, {"generator", "fetch_only", "l2_sets", "distinct_tags", "repetitions"}, "trace");
    spec.generator = ConflictSpec{u("l2_sets", 1), u("distinct_tags", 1), u("repetitions", 1)};
  } else if (gen == "pointer_chase") {
    reject_unknown(j, {"generator", "fetch_only", "nodes", "node_bytes", "length", "seed"}, "trace");
    spec.generator = PointerChaseSpec{u("nodes", 1), u("node_bytes", 64), u("length", 1), u("seed", 1)};
  } else {
    config_fail("trace.generator", "unknown generator \"" + gen + "\"");
  }
  if (j.contains("fetch_only")) spec.fetch_only = as_bool(j["fetch_only"], "trace.fetch_only");
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  return spec;
}

void set_trace_seed(TraceSpec& spec, std::uint64_t seed) {
  if (auto* u = std::get_if<UniformRandomSpec>(&spec.generator)) u->seed = seed;
  if (auto* p = std::get_if<PointerChaseSpec>(&spec.generator)) p->seed = seed;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dir_of(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

RunConfig run_config_from(const json& j, const std::string& base_dir, bool allow_variants) {
  if (allow_variants) {
    reject_unknown(j, {"preset", "itlb", "dtlb", "l2", "superpage_entries", "latencies",
                       "demand_paging", "data_frame_base", "mappings", "trace", "seed", "output",
                       "variants"},
                   "");
  } else {
    reject_unknown(j, {"preset", "itlb", "dtlb", "l2", "superpage_entries", "latencies",
                       "demand_paging", "data_frame_base", "mappings", "trace", "seed", "output"},
                   "");
  }
  RunConfig cfg;
  cfg.mmu = default_mmu();
  apply_mmu_keys(j, cfg.mmu, cfg.explicit_seeds, &cfg.preset, "");
  if (j.contains("demand_paging")) cfg.mmu.demand_paging = as_bool(j["demand_paging"], "demand_paging");
  if (j.contains("data_frame_base")) cfg.mmu.data_frame_base = as_u64(j["data_frame_base"], "data_frame_base");
  if (j.contains("mappings")) {
    const json& maps = j["mappings"];
    if (!maps.is_array()) config_fail("mappings", "expected an array");
    for (std::size_t i = 0; i < maps.size(); ++i) cfg.mappings.push_back(parse_mapping(maps[i], i));
  }
  if (j.contains("trace")) {
    const json& t = j["trace"];
    if (t.is_string()) {
      std::filesystem::path p(t.get<std::string>());
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      cfg.trace = p.string();
    } else {
      cfg.trace = trace_spec_from(t, cfg.trace_seed_explicit);
    }
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    if (o.is_string()) {
      cfg.output_path = o.get<std::string>();
    } else {
      reject_unknown(o, {"path", "format"}, "output");
      if (o.contains("path")) cfg.output_path = as_string(o["path"], "output.path");
      if (o.contains("format")) cfg.format = parse_format(as_string(o["format"], "output.format"));
    }
  }
  const std::uint64_t seed = j.contains("seed") ? as_u64(j["seed"], "seed") : 1;
  cfg.reseed(seed);
  try {
    cfg.mmu.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
  return cfg;
}

Preset make_preset(const char* name, TlbGeometry dtlb, TlbGeometry itlb,
                   std::optional<TlbGeometry> l2) {
  MmuConfig mmu;
  mmu.itlb = itlb;
  mmu.dtlb = dtlb;
  mmu.l2 = l2;
  apply_seeds(mmu, {}, 1);
  return Preset{name, mmu};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t run_seed, unsigned which) noexcept {
  // splitmix64 finalizer over (seed, structure)
  std::uint64_t z = run_seed + 0x9E3779B97F4A7C15ull * (which + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z == 0 ? 1 : z;
}

void apply_seeds(MmuConfig& mmu, const ExplicitSeeds& seeds, std::uint64_t run_seed) {
  if (!seeds[0]) mmu.itlb.seed = derive_seed(run_seed, 0);
  if (!seeds[1]) mmu.dtlb.seed = derive_seed(run_seed, 1);
  if (mmu.l2 && !seeds[2]) mmu.l2->seed = derive_seed(run_seed, 2);
}

void RunConfig::reseed(std::uint64_t new_seed) {
  seed = new_seed;
  apply_seeds(mmu, explicit_seeds, seed);
  if (auto* spec = std::get_if<TraceSpec>(&trace); spec && !trace_seed_explicit) {
    set_trace_seed(*spec, seed);
  }
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> kPresets = [] {
    using P = ReplacementPolicy;
    const TlbGeometry fa32{1, 32, P::PseudoLru, 1};
    return std::vector<Preset>{
        make_preset("I", fa32, fa32, std::nullopt),
        make_preset("II", fa32, fa32, TlbGeometry{32, 4, P::Random, 1}),
        make_preset("III", fa32, fa32, TlbGeometry{128, 4, P::Random, 1}),
        make_preset("IV", TlbGeometry{8, 8, P::PseudoLru, 1}, TlbGeometry{16, 8, P::PseudoLru, 1},
                    TlbGeometry{128, 8, P::Random, 1}),
        make_preset("V", TlbGeometry{16, 8, P::PseudoLru, 1}, TlbGeometry{8, 8, P::PseudoLru, 1},
                    TlbGeometry{128, 8, P::Random, 1}),
    };
  }();
  return kPresets;
}

const Preset& find_preset(std::string_view name) {
  for (const Preset& p : presets()) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::Config, "preset: unknown configuration \"" + std::string(name) +
                                     "\" (expected I, II, III, IV or V)");
}

RunConfig config_from_preset(std::string_view name) {
  RunConfig cfg;
  cfg.mmu = find_preset(name).mmu;
  cfg.preset = std::string(name);
  cfg.reseed(1);
  return cfg;
}

RunConfig parse_config(std::string_view json_text, const std::string& base_dir) {
  try {
    return run_config_from(parse_json(json_text), base_dir, false);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_file(path), dir_of(path));
}

SweepConfig parse_sweep_config(std::string_view json_text, const std::string& base_dir) {
  try {
    const json j = parse_json(json_text);
    SweepConfig sc;
    sc.base = run_config_from(j, base_dir, true);
    if (!j.contains("variants") || !j["variants"].is_array()) {
      config_fail("variants", "required array of MMU overrides");
    }
    const json& vs = j["variants"];
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const std::string ctx = "variants[" + std::to_string(i) + "]";
      const json& v = vs[i];
      reject_unknown(v, {"name", "preset", "itlb", "dtlb", "l2", "superpage_entries", "latencies"},
                     ctx);
      SweepVariant var;
      var.name = v.contains("name") ? as_string(v["name"], ctx + ".name") : "variant" + std::to_string(i);
      var.mmu = sc.base.mmu;
      var.explicit_seeds = sc.base.explicit_seeds;
      apply_mmu_keys(v, var.mmu, var.explicit_seeds, nullptr, ctx);
      apply_seeds(var.mmu, var.explicit_seeds, sc.base.seed);
      try {
        var.mmu.validate();
      } catch (const Error& e) {
        throw Error(ErrorCode::Config, ctx + ": " + e.what());
      }
      for (const SweepVariant& prev : sc.variants) {
        if (prev.name == var.name) config_fail(ctx + ".name", "duplicate variant name");
      }
      sc.variants.push_back(std::move(var));
    }
    if (sc.variants.size() < 2) config_fail("variants", "a sweep needs at least two variants");
    return sc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("sweep config: ") + e.what());
  }
}

SweepConfig load_sweep_config(const std::string& path) {
  return parse_sweep_config(read_file(path), dir_of(path));
}

TraceSpec parse_trace_spec(std::string_view json_text, bool* seed_explicit) {
  bool explicit_seed = false;
  try {
    TraceSpec spec = trace_spec_from(parse_json(json_text), explicit_seed);
    if (seed_explicit) *seed_explicit = explicit_seed;
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("trace spec: ") + e.what());
  }
}

}  // namespace tlbsim
