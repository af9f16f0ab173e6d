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

#include <stdexcept>
#include <string>

namespace tlbsim {

enum class ErrorCode {
  Canonicality,
  Alignment,
  PageFault,
  MappingConflict,
  Parse,
  Config,
  UndefinedMetric,
  InternalConsistency,
  Io,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the simulator core. The C API maps `code()` onto
/// its status enumeration.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the walker when a PTE on the path is invalid or reserved.
class PageFault : public Error {
 public:
  PageFault(unsigned level, const std::string& what)
      : Error(ErrorCode::PageFault, what), level_(level) {}

  unsigned level() const noexcept { return level_; }

 private:
  unsigned level_;
};

/// Raised by trace parsing; `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::Parse, what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tlbsim
