// Copyright 2026 The qforecast Authors
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

namespace qforecast {

/// Invalid configuration: register sizes, layer counts, plan values.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Caller passed arguments that do not fit the object they act on
/// (qubit index out of range, vector length mismatch, ...).
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. `line()` is 1-based; 0 when not line-specific.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Well-formed input that violates a dataset invariant (duplicate or
/// out-of-order months, nothing left after filtering, ...).
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Statistical model cannot be fitted (zero variance, rank too low).
class DegenerateError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace qforecast
