// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperq/ast.hpp"
#include "hyperq/eval.hpp"
#include "hyperq/trace.hpp"

namespace hyperq {

struct PrefixItem {
  bool is_prop;  // propositional vs trace quantifier
  bool exists;
  std::string name;
  bool operator==(const PrefixItem&) const = default;
};

/// Splits a prenex HyperQPTL formula into its quantifier prefix and
/// quantifier-free matrix; throws ShapeError when not prenex.
std::vector<PrefixItem> prenex_prefix(const Formula& f, Formula* matrix);

/// Finite table for one existentially quantified variable: maps the values
/// of the universals quantified before it (as domain indices: traces of T in
/// member order, rows in row-universe order) to a codomain index (a trace of
/// T for trace owners, a row over {owner} for propositional owners).
struct SkolemFunction {
  bool owner_is_prop = false;
  std::string owner;
  std::vector<PrefixItem> signature;
  std::map<std::vector<std::size_t>, std::size_t> table;
};

using SkolemFamily = std::map<std::string, SkolemFunction>;

/// Truth tables of all subformulas over positions 0..S+L-1 with loop-back at
/// S; the finite witness object of the alternative semantics.
class ExpansionTable {
 public:
  ExpansionTable(std::vector<Formula> subformulas, std::size_t stem, std::size_t loop,
                 std::vector<std::vector<bool>> bits);

  const std::vector<Formula>& subformulas() const { return subformulas_; }
  std::size_t stem() const { return stem_; }
  std::size_t loop() const { return loop_; }
  std::size_t width() const { return stem_ + loop_; }
  std::size_t index_of(const Formula& f) const;
  bool bit(std::size_t subformula, std::size_t pos) const {
    return bits_[subformula][pos];
  }
  ExpansionTable with_bits(std::vector<std::vector<bool>> bits) const {
    return ExpansionTable(subformulas_, stem_, loop_, std::move(bits));
  }
  const std::vector<std::vector<bool>>& bits() const { return bits_; }

 private:
  std::vector<Formula> subformulas_;  // post-order, structurally deduplicated
  std::size_t stem_, loop_;
  std::vector<std::vector<bool>> bits_;
};

/// Builds the expansion of a core quantifier-free formula (atoms, !, |, X, F)
/// under a paired assignment.
ExpansionTable build_expansion(const Formula& qf, const Assignment& a);

/// The six local consistency conditions: atoms against the assignment,
/// negation and disjunction pointwise, X through the wrapped successor, F as
/// wrapped reachability.
bool check_consistency(const ExpansionTable& t, const Assignment& a);

/// Checks the prenex formula against explicitly given Skolem functions: every
/// assignment of the universals that is consistent with the family must make
/// the matrix true at position 0.
bool skolem_eval(const TraceSet& model, const Formula& prenex, const SkolemFamily& s,
                 const EvalParams& p);

/// Searches all Skolem families in lexicographic order; returns the first one
/// accepted by skolem_eval, if any.
std::optional<SkolemFamily> search_skolem(const TraceSet& model, const Formula& prenex,
                                          const EvalParams& p,
                                          std::size_t family_cap = std::size_t(1) << 22);

}  // namespace hyperq
