// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hyperq/arith_formula.hpp"
#include "hyperq/ast.hpp"
#include "hyperq/syntax.hpp"

namespace hyperq::verify {

struct SuiteResult {
  std::string suite;
  int cases = 0;
  int failures = 0;
  std::vector<std::string> notes;  // one line per failure (or remark)
  bool ok() const { return failures == 0; }
};

std::string format_result(const SuiteResult& r);

// ---- randomized generators ----

/// Random AST for round-trip fuzzing; free variables allowed.
Formula random_formula(Logic logic, std::mt19937_64& rng, int max_depth);
ArithFormula random_arith_formula(std::mt19937_64& rng, int max_depth);

/// Random quantifier-free formula over bound trace variables and rows.
Formula random_qf_matrix(Logic logic, std::mt19937_64& rng, int max_depth,
                         const std::vector<std::string>& trace_vars,
                         const std::vector<std::string>& row_props);

// ---- suites (the CLI `verify` command and the acceptance gate share these) ----

SuiteResult roundtrip_suite(std::uint64_t seed, int cases_per_logic,
                            const std::string& corpus_dir);
SuiteResult lasso_exactness_suite(std::uint64_t seed, int cases);
SuiteResult pairing_suite();
SuiteResult expansion_suite(std::uint64_t seed, int cases);
SuiteResult skolem_grid_suite();
SuiteResult lemma1_suite(std::uint64_t seed, int cases);
SuiteResult lemma3_suite(const std::string& corpus_dir);
SuiteResult lemma4_suite(const std::string& corpus_dir);
SuiteResult structural_fidelity_suite();
SuiteResult two_variable_suite(const std::string& corpus_dir);

/// Corpus enumeration helper: sorted .hq files under dir (recursive).
std::vector<std::string> corpus_files(const std::string& dir);

}  // namespace hyperq::verify
