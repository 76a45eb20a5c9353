// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <variant>

#include "hyperq/arith_formula.hpp"
#include "hyperq/ast.hpp"

namespace hyperq {

/// File-level logic tags: the three hyperlogics plus bounded arithmetic.
enum class FileLogic { HyperQPTL, HyperQPTLPlus, Hyper2LTL, Arith };

std::string to_string(FileLogic logic);
FileLogic file_logic_from_string(const std::string& tag);

Formula parse_formula(const std::string& text, Logic logic);
ArithFormula parse_arith(const std::string& text);

std::string print_formula(const Formula& f);
std::string print_arith(const ArithFormula& f);

using AnyFormula = std::variant<Formula, ArithFormula>;

/// Parses the body of a .hq file: `#` starts a line comment; a leading
/// `#logic: <tag>` comment selects the grammar unless overridden.
struct ParsedFile {
  FileLogic logic;
  AnyFormula formula;
};
ParsedFile parse_file_text(const std::string& text,
                           std::optional<FileLogic> logic_override = std::nullopt);
ParsedFile parse_file(const std::string& path,
                      std::optional<FileLogic> logic_override = std::nullopt);

std::string print_any(const AnyFormula& f);

}  // namespace hyperq
