// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace islab {

/// Base class for all errors raised by the library. Domain "negative"
/// results (failed tests, rejected certifications, inadequate programs)
/// are ordinary return values, not exceptions; Error is reserved for
/// violated preconditions and malformed input.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in program, suite, spec, fragment or state text.
/// Carries the 1-based source position of the offending token.
class ParseError : public Error {
public:
  ParseError(const std::string &message, std::size_t line, std::size_t column)
      : Error(message + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line(line), column(column) {}

  std::size_t line;
  std::size_t column;
};

} // namespace islab
