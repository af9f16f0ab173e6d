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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tlbsim/access.hpp"

namespace tlbsim {

// Synthetic traces place data pages from kDataBaseVpn upward and fetch from
// a single code page at kCodeVpn.
inline constexpr std::uint64_t kDataBaseVpn = 0x40000;
inline constexpr std::uint64_t kCodeVpn = 0x11;

struct SequentialSpec {
  std::uint64_t pages = 1;
  friend bool operator==(const SequentialSpec&, const SequentialSpec&) = default;
};
struct StridedSpec {
  std::uint64_t stride_pages = 1;
  std::uint64_t count = 1;
  friend bool operator==(const StridedSpec&, const StridedSpec&) = default;
};
struct UniformRandomSpec {
  std::uint64_t working_set_pages = 1;
  std::uint64_t length = 1;
  std::uint64_t seed = 1;
  friend bool operator==(const UniformRandomSpec&, const UniformRandomSpec&) = default;
};
/// `repetitions` rounds over `distinct_tags` data pages that share one index
/// of an `l2_sets`-set structure.
struct ConflictSpec {
  std::uint64_t l2_sets = 1;
  std::uint64_t distinct_tags = 1;
  std::uint64_t repetitions = 1;
  friend bool operator==(const ConflictSpec&, const ConflictSpec&) = default;
};
/// Walks `nodes` objects of `node_bytes` each in a seeded random order.
struct PointerChaseSpec {
  std::uint64_t nodes = 1;
  std::uint64_t node_bytes = 64;
  std::uint64_t length = 1;
  std::uint64_t seed = 1;
  friend bool operator==(const PointerChaseSpec&, const PointerChaseSpec&) = default;
};

struct TraceSpec {
  std::variant<SequentialSpec, StridedSpec, UniformRandomSpec, ConflictSpec, PointerChaseSpec>
      generator;
  /// Emit the generated addresses as instruction fetches with no data access.
  bool fetch_only = false;

  void validate() const;
  friend bool operator==(const TraceSpec&, const TraceSpec&) = default;
};

const char* generator_name(const TraceSpec& spec) noexcept;

/// Grammar: `PC_HEX [ (L|S) VA_HEX ]`, hex with optional 0x prefix and `_`
/// digit separators. Returns nullopt for blank and `#` comment lines.
/// Throws ParseError (malformed) or CanonicalityError.
std::optional<AccessRecord> parse_trace_line(std::string_view line, std::size_t line_number = 0);

std::string render_trace_line(const AccessRecord& record);

std::vector<AccessRecord> generate(const TraceSpec& spec);

/// Streams records from a text trace; `.gz` files are decompressed.
class TraceReader {
 public:
  explicit TraceReader(const std::string& path);
  ~TraceReader();
  TraceReader(const TraceReader&) = delete;
  TraceReader& operator=(const TraceReader&) = delete;

  std::optional<AccessRecord> next();
  std::size_t line_number() const noexcept { return line_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t line_ = 0;
};

std::vector<AccessRecord> read_trace(const std::string& path);

/// Writes one line per record; gzip-compressed when `path` ends in `.gz`.
void write_trace(const std::string& path, std::span<const AccessRecord> records);

}  // namespace tlbsim
