// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "hyperq/ast.hpp"
#include "hyperq/trace.hpp"

namespace hyperq {

/// Lemma-2-style paired assignment: trace variables to traces, quantified
/// propositions to singleton-alphabet rows, set variables to trace sets.
struct Assignment {
  std::map<std::string, LassoTrace> traces;
  std::map<std::string, LassoTrace> prop_rows;
  std::map<std::string, TraceSet> sets;
};

struct EvalParams {
  UniverseParams universe;
  Alphabet ap;
  std::size_t universe_cap = kDefaultUniverseCap;
  std::size_t iteration_cap = std::size_t(1) << 21;  // quantifier-domain walks

  EvalParams() = default;
  EvalParams(UniverseParams u, Alphabet a) : universe(u), ap(std::move(a)) {}
};

/// Bounded evaluation of a HyperQPTL sentence: trace quantifiers range over
/// the current model exactly; propositional quantifiers over the bounded row
/// universe, applied by overriding the model.
bool eval_hyperqptl(const TraceSet& model, const Formula& f, const EvalParams& p);

/// HyperQPTL+: propositional quantifiers range over every T' that agrees with
/// the model off the quantified proposition, realized by assigning each
/// projection class a nonempty set of bounded rows.
bool eval_hyperqptl_plus(const TraceSet& model, const Formula& f, const EvalParams& p);

/// Hyper2LTL: set quantifiers range over all subsets of the bounded trace
/// universe (including the empty set); Xa is the full bounded universe and Xd
/// the model.
bool eval_hyper2ltl(const TraceSet& model, const Formula& f, const EvalParams& p);

/// Quantifier-free evaluation against a paired assignment at a position;
/// labeled atoms read the trace assignment, unlabeled atoms the row
/// assignment.
bool eval_qf(const Assignment& a, std::size_t position, const Formula& f);

/// Semantic stand-in for theta_{(+,*)}: the arithmetic-proposition projection
/// of the set must equal all bounded members of T_{(+,*)}.
bool eval_axiom_plus_times(const TraceSet& model, const EvalParams& p);

/// Harness entry: evaluate with free variables pre-bound, at a position.
/// Quantifier domains follow the logic of `f` as above.
bool eval_at(const TraceSet& model, const Formula& f, const EvalParams& p,
             const Assignment& initial, std::size_t position);

}  // namespace hyperq
