// Copyright 2026 The loopmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace loopmem {

/// Base of every error thrown by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string &message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string &kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define LOOPMEM_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string &message) : Error(tag, message) {}    \
  }

LOOPMEM_DEFINE_ERROR(InvalidStateError, "invalid_state");
LOOPMEM_DEFINE_ERROR(UndefinedStateError, "undefined_state");
LOOPMEM_DEFINE_ERROR(GainError, "gain");
LOOPMEM_DEFINE_ERROR(ComponentKindError, "component_kind");
LOOPMEM_DEFINE_ERROR(UnschedulableError, "unschedulable");
LOOPMEM_DEFINE_ERROR(IncompleteSetError, "incomplete_set");
LOOPMEM_DEFINE_ERROR(RankError, "rank");
LOOPMEM_DEFINE_ERROR(NoSignalError, "no_signal");
LOOPMEM_DEFINE_ERROR(InvalidArgumentError, "invalid_argument");
LOOPMEM_DEFINE_ERROR(IoError, "io");

#undef LOOPMEM_DEFINE_ERROR

/// Scenario validation failure. Carries the dotted field path and the
/// 1-based source line (0 when unknown).
class SchemaError : public Error {
 public:
  SchemaError(std::string field, int line, const std::string &message)
      : Error("schema", format(field, line, message)),
        field_(std::move(field)),
        line_(line) {}

  const std::string &field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string &field, int line,
                            const std::string &message) {
    std::string out = field + ": " + message;
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    return out;
  }

  std::string field_;
  int line_;
};

}  // namespace loopmem
