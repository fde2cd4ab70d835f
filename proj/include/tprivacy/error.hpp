//
// Copyright 2026 The tprivacy Authors
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
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tprivacy {

// Failure categories surfaced by the library. The CLI prints the name of the
// category on standard error, so the spellings below are part of the
// command-line contract.
enum class ErrorCode {
  invalid_argument,
  degenerate_design,
  unsupported,
  degenerate_weights,
  non_pd_information,
  infeasible_abc,
  undefined_index,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return "invalid-argument";
    case ErrorCode::degenerate_design:
      return "degenerate-design";
    case ErrorCode::unsupported:
      return "unsupported";
    case ErrorCode::degenerate_weights:
      return "degenerate-weights";
    case ErrorCode::non_pd_information:
      return "non-pd-information";
    case ErrorCode::infeasible_abc:
      return "infeasible-abc";
    case ErrorCode::undefined_index:
      return "undefined-index";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::invalid_argument, message);
}

}  // namespace tprivacy
