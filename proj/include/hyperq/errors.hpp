// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hyperq {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lexical or grammatical problem in surface text. Positions are 1-based.
struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : Error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
        line(line_),
        column(column_) {}
};

/// A formula variant that is illegal in the tagged logic (e.g. an unlabeled
/// atom outside HyperQPTL), or cross-logic mixing of subtrees.
struct LogicViolation : Error {
  using Error::Error;
};

struct AlphabetError : Error {
  using Error::Error;
};

struct EvalError : Error {
  using Error::Error;
};

/// Structural precondition failures: non-prenex input where prenex is
/// required, bad quantifier shape, third-order quantifier where forbidden.
struct ShapeError : Error {
  using Error::Error;
};

/// Enumeration size guards. Caps fail loudly instead of truncating.
struct CapError : Error {
  using Error::Error;
};

}  // namespace hyperq
