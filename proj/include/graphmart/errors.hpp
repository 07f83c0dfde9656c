// Copyright 2026 The graphmart Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphmart {

// Base class for all domain errors. CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// A malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// A required triple has no resolved price.
class MissingOffer : public Error {
 public:
  using Error::Error;
};

// A purchased triple references a product that is not registered.
class UnknownProduct : public Error {
 public:
  using Error::Error;
};

// A product references a graph that no endpoint serves.
class UnknownGraph : public Error {
 public:
  using Error::Error;
};

// A mapping in a summary has no value assigned by the valuation.
class MissingValue : public Error {
 public:
  using Error::Error;
};

// Instance exceeds the brute-force enumeration guard.
class TooLarge : public Error {
 public:
  using Error::Error;
};

// A utility-ratio table was requested for an instance lacking a
// greedy record or an optimal exact record.
class MissingPair : public Error {
 public:
  using Error::Error;
};

// An allocation problem violates its structural invariants.
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

}  // namespace graphmart
