// Copyright 2026 The rydberg-ladder Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rydberg {

// Precondition violated by the caller (bad size, mismatched lattice, ...).
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A request that would exceed a configured memory/dimension budget.
class ResourceLimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Iterative solver gave up; carries the best residual it reached.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string &what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}
    [[nodiscard]] double best_residual() const noexcept { return best_residual_; }

  private:
    double best_residual_;
};

// Statistics requested on input with zero spread.
class DegenerateInputError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Malformed record in a line-oriented data file. Line numbers are 1-based.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class SchemaVersionError : public std::runtime_error {
  public:
    SchemaVersionError(int found, int expected, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": schema_version " + std::to_string(found) +
                             " is not supported (expected " + std::to_string(expected) + ")"),
          found_(found) {}
    [[nodiscard]] int found() const noexcept { return found_; }

  private:
    int found_;
};

} // namespace rydberg
