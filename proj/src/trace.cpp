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

#include "tlbsim/trace.hpp"

#include <zlib.h>

#include <cctype>
#include <cstdio>
#include <numeric>

#include "tlbsim/error.hpp"
#include "tlbsim/xorshift.hpp"

namespace tlbsim {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
  throw ParseError(line, "trace line " + std::to_string(line) + ": " + why);
}

std::uint64_t parse_hex(std::string_view tok, std::size_t line) {
  if (tok.size() >= 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) tok.remove_prefix(2);
  std::uint64_t value = 0;
  unsigned significant = 0;
  bool any = false;
  bool after_sep = false;
  for (const char c : tok) {
    if (c == '_') {
      if (!any || after_sep) parse_fail(line, "misplaced '_' in hex literal");
      after_sep = true;
      continue;
    }
    unsigned d;
    if (c >= '0' && c <= '9') {
      d = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      d = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      d = static_cast<unsigned>(c - 'A' + 10);
    } else {
      parse_fail(line, "invalid hex literal '" + std::string(tok) + "'");
    }
    if ((significant > 0 || d != 0) && ++significant > 16) {
      parse_fail(line, "hex literal wider than 64 bits");
    }
    value = value * 16 + d;
    any = true;
    after_sep = false;
  }
  if (!any || after_sep) parse_fail(line, "empty or truncated hex literal");
  return value;
}

VirtAddr checked_va(std::uint64_t raw, std::size_t line) {
  const VirtAddr va{raw};
  if (!va.canonical()) {
    char buf[112];
    std::snprintf(buf, sizeof buf, "trace line %zu: non-canonical Sv39 address 0x%llx", line,
                  static_cast<unsigned long long>(raw));
    throw Error(ErrorCode::Canonicality, buf);
  }
  return va;
}

VirtAddr page_va(std::uint64_t vpn, std::uint64_t offset) {
  return rebuild_va(Vpn{vpn}, offset);
}

VirtAddr code_pc(std::uint64_t i) {
  return page_va(kCodeVpn, (i % 1024) * 4);
}

void check_count(std::uint64_t v, const char* what) {
  if (v < 1) throw Error(ErrorCode::Config, std::string("trace.") + what + ": must be >= 1");
}

void check_vpn(std::uint64_t last_vpn) {
  if (last_vpn > sv39::kVpnMask) {
    throw Error(ErrorCode::Config, "trace: generated pages exceed the 39-bit address space");
  }
}

}  // namespace

void TraceSpec::validate() const {
  std::visit(
      [](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, SequentialSpec>) {
          check_count(g.pages, "pages");
          check_vpn(kDataBaseVpn + g.pages - 1);
        } else if constexpr (std::is_same_v<T, StridedSpec>) {
          check_count(g.stride_pages, "stride_pages");
          check_count(g.count, "count");
          if ((g.count - 1) > (sv39::kVpnMask / g.stride_pages)) check_vpn(sv39::kVpnMask + 1);
          check_vpn(kDataBaseVpn + (g.count - 1) * g.stride_pages);
        } else if constexpr (std::is_same_v<T, UniformRandomSpec>) {
          check_count(g.working_set_pages, "working_set_pages");
          check_count(g.length, "length");
          check_vpn(kDataBaseVpn + g.working_set_pages - 1);
        } else if constexpr (std::is_same_v<T, ConflictSpec>) {
          check_count(g.l2_sets, "l2_sets");
          check_count(g.distinct_tags, "distinct_tags");
          check_count(g.repetitions, "repetitions");
          if ((g.distinct_tags - 1) > (sv39::kVpnMask / g.l2_sets)) check_vpn(sv39::kVpnMask + 1);
          check_vpn(kDataBaseVpn + (g.distinct_tags - 1) * g.l2_sets);
        } else {
          check_count(g.nodes, "nodes");
          check_count(g.node_bytes, "node_bytes");
          check_count(g.length, "length");
          if (g.nodes > (sv39::kVpnMask << sv39::kPageShift) / g.node_bytes) {
            check_vpn(sv39::kVpnMask + 1);
          }
          check_vpn(kDataBaseVpn + ((g.nodes * g.node_bytes - 1) >> sv39::kPageShift));
        }
      },
      generator);
}

const char* generator_name(const TraceSpec& spec) noexcept {
  static constexpr const char* kNames[] = {"sequential", "strided", "uniform_random", "conflict",
                                           "pointer_chase"};
  return kNames[spec.generator.index()];
}

std::optional<AccessRecord> parse_trace_line(std::string_view line, std::size_t line_number) {
  std::string_view tokens[4];
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    if (count == 0 && line[i] == '#') return std::nullopt;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (count == 4) parse_fail(line_number, "too many fields");
    tokens[count++] = line.substr(start, i - start);
  }
  if (count == 0) return std::nullopt;
  if (count != 1 && count != 3) parse_fail(line_number, "expected `PC [L|S VA]`");

  AccessRecord rec;
  rec.pc = checked_va(parse_hex(tokens[0], line_number), line_number);
  if (count == 3) {
    DataAccess d;
    if (tokens[1] == "L") {
      d.kind = AccessKind::Load;
    } else if (tokens[1] == "S") {
      d.kind = AccessKind::Store;
    } else {
      parse_fail(line_number, "access kind must be L or S, got '" + std::string(tokens[1]) + "'");
    }
    d.va = checked_va(parse_hex(tokens[2], line_number), line_number);
    rec.data = d;
  }
  return rec;
}

std::string render_trace_line(const AccessRecord& record) {
  char buf[64];
  if (record.data) {
    std::snprintf(buf, sizeof buf, "0x%llx %c 0x%llx",
                  static_cast<unsigned long long>(record.pc.value),
                  record.data->kind == AccessKind::Store ? 'S' : 'L',
                  static_cast<unsigned long long>(record.data->va.value));
  } else {
    std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(record.pc.value));
  }
  return buf;
}

std::vector<AccessRecord> generate(const TraceSpec& spec) {
  spec.validate();
  std::vector<AccessRecord> out;
  std::uint64_t n = 0;
  auto emit = [&](VirtAddr va, AccessKind kind) {
    if (spec.fetch_only) {
      out.push_back(AccessRecord{va, std::nullopt});
    } else {
      out.push_back(AccessRecord{code_pc(n), DataAccess{kind, va}});
    }
    ++n;
  };

  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, SequentialSpec>) {
          out.reserve(g.pages);
          for (std::uint64_t p = 0; p < g.pages; ++p) {
            emit(page_va(kDataBaseVpn + p, 0), AccessKind::Load);
          }
        } else if constexpr (std::is_same_v<T, StridedSpec>) {
          out.reserve(g.count);
          for (std::uint64_t k = 0; k < g.count; ++k) {
            emit(page_va(kDataBaseVpn + k * g.stride_pages, 0), AccessKind::Load);
          }
        } else if constexpr (std::is_same_v<T, UniformRandomSpec>) {
          out.reserve(g.length);
          XorShift64Star rng(g.seed);
          for (std::uint64_t k = 0; k < g.length; ++k) {
            const std::uint64_t page = rng.next_below(g.working_set_pages);
            const std::uint64_t offset = rng.next_below(512) * 8;
            const AccessKind kind = rng.next_below(4) == 0 ? AccessKind::Store : AccessKind::Load;
            emit(page_va(kDataBaseVpn + page, offset), kind);
          }
        } else if constexpr (std::is_same_v<T, ConflictSpec>) {
          out.reserve(g.distinct_tags * g.repetitions);
          for (std::uint64_t r = 0; r < g.repetitions; ++r) {
            for (std::uint64_t k = 0; k < g.distinct_tags; ++k) {
              emit(page_va(kDataBaseVpn + k * g.l2_sets, 0), AccessKind::Load);
            }
          }
        } else {
          out.reserve(g.length);
          std::vector<std::uint64_t> order(g.nodes);
          std::iota(order.begin(), order.end(), 0);
          XorShift64Star rng(g.seed);
          for (std::uint64_t k = g.nodes - 1; k > 0; --k) {
            std::swap(order[k], order[rng.next_below(k + 1)]);
          }
          const std::uint64_t base = kDataBaseVpn << sv39::kPageShift;
          for (std::uint64_t k = 0; k < g.length; ++k) {
            const std::uint64_t addr = base + order[k % g.nodes] * g.node_bytes;
            emit(page_va(addr >> sv39::kPageShift, addr & 0xFFF), AccessKind::Load);
          }
        }
      },
      spec.generator);
  return out;
}

struct TraceReader::Impl {
  gzFile file = nullptr;
  std::string path;
  std::string buffer;
};

TraceReader::TraceReader(const std::string& path) : impl_(std::make_unique<Impl>()) {
  impl_->path = path;
  // gzopen reads uncompressed files transparently.
  impl_->file = gzopen(path.c_str(), "rb");
  if (impl_->file == nullptr) throw Error(ErrorCode::Io, "cannot open trace file: " + path);
  impl_->buffer.resize(4096);
}

TraceReader::~TraceReader() {
  if (impl_ && impl_->file) gzclose(impl_->file);
}

std::optional<AccessRecord> TraceReader::next() {
  std::string line;
  for (;;) {
    line.clear();
    bool got = false;
    for (;;) {
      char* chunk = gzgets(impl_->file, impl_->buffer.data(), static_cast<int>(impl_->buffer.size()));
      if (chunk == nullptr) break;
      got = true;
      line += chunk;
      if (!line.empty() && line.back() == '\n') break;
    }
    if (!got) {
      int errnum = 0;
      const char* msg = gzerror(impl_->file, &errnum);
      if (errnum != Z_OK && errnum != Z_STREAM_END) {
        throw Error(ErrorCode::Io, "error reading " + impl_->path + ": " + msg);
      }
      return std::nullopt;
    }
    ++line_;
    if (auto rec = parse_trace_line(line, line_)) return rec;
  }
}

std::vector<AccessRecord> read_trace(const std::string& path) {
  TraceReader reader(path);
  std::vector<AccessRecord> out;
  while (auto rec = reader.next()) out.push_back(*rec);
  return out;
}

void write_trace(const std::string& path, std::span<const AccessRecord> records) {
  const bool gz = ends_with(path, ".gz");
  gzFile file = gzopen(path.c_str(), gz ? "wb6" : "wbT");
  if (file == nullptr) throw Error(ErrorCode::Io, "cannot write trace file: " + path);
  for (const AccessRecord& r : records) {
    const std::string line = render_trace_line(r) + "\n";
    if (gzwrite(file, line.data(), static_cast<unsigned>(line.size())) != static_cast<int>(line.size())) {
      gzclose(file);
      throw Error(ErrorCode::Io, "short write to trace file: " + path);
    }
  }
  if (gzclose(file) != Z_OK) throw Error(ErrorCode::Io, "error closing trace file: " + path);
}

}  // namespace tlbsim
