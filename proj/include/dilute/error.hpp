// Copyright 2026 The dilute authors
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

#ifndef DILUTE_ERROR_HPP
#define DILUTE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace dilute {

enum class ErrorKind {
  invalid_argument,
  unsupported_model,
  invalid_target,
  incompatible_jumps,
  solver_failure,
  integration_failure,
  insufficient_data,
  invalid_data,
  capacity_exceeded,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::unsupported_model: return "unsupported-model";
    case ErrorKind::invalid_target: return "invalid-target";
    case ErrorKind::incompatible_jumps: return "incompatible-jumps";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::integration_failure: return "integration-failure";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::invalid_data: return "invalid-data";
    case ErrorKind::capacity_exceeded: return "capacity-exceeded";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace dilute

#endif  // DILUTE_ERROR_HPP
