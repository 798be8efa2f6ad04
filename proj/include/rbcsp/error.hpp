// Copyright 2026 The rbcsp Authors
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
#include <string_view>

namespace rbcsp {

enum class ErrorKind {
  kInvalidParameters,
  kCapacity,
  kRange,
  kInvalidAssignment,
  kInvalidPair,
  kDomain,
  kDegenerate,
  kParse,
  kValidation,
  kNoThreshold,
  kTooLarge,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameters: return "invalid-parameters";
    case ErrorKind::kCapacity: return "capacity";
    case ErrorKind::kRange: return "range";
    case ErrorKind::kInvalidAssignment: return "invalid-assignment";
    case ErrorKind::kInvalidPair: return "invalid-pair";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kNoThreshold: return "no-threshold-in-range";
    case ErrorKind::kTooLarge: return "too-large";
  }
  return "unknown";
}

/// All library failures are reported through this one exception type; the
/// kind distinguishes them for callers that need to branch.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rbcsp
