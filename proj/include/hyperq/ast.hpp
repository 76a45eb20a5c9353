// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hyperq/errors.hpp"

namespace hyperq {

enum class Logic { HyperQPTL, HyperQPTLPlus, Hyper2LTL };
std::string to_string(Logic logic);

enum class SetFlag { None, All, Discourse };

/// Second-order trace-set variable. The names "Xa" and "Xd" are reserved for
/// the distinguished all-traces / universe-of-discourse variables and always
/// carry the matching flag.
struct SetVar {
  std::string name;
  SetFlag flag = SetFlag::None;

  SetVar() = default;
  explicit SetVar(std::string n);
  static SetVar all() { return SetVar("Xa"); }
  static SetVar discourse() { return SetVar("Xd"); }

  bool distinguished() const { return flag != SetFlag::None; }
  bool operator==(const SetVar& o) const { return name == o.name; }
  bool operator<(const SetVar& o) const { return name < o.name; }
};

enum class Kind {
  LabeledAtom,    // p[pi]
  PropAtom,       // bare q (HyperQPTL only)
  AxiomPlusTimes, // opaque leaf whose semantics live in the evaluator
  Not,
  Or,
  And,
  Implies,
  Iff,
  Next,
  Eventually,
  Always,
  Until,
  TraceQuant,     // exists/forall pi [in X]
  PropQuant,      // existsP/forallP q
  SetQuant,       // existsS/forallS X
};

struct Node;

/// Immutable formula handle; shares structure freely.
class Formula {
 public:
  Formula() = default;
  const Node& node() const { return *ptr_; }
  const Node* raw() const { return ptr_.get(); }
  explicit operator bool() const { return ptr_ != nullptr; }

  Logic logic() const;
  Kind kind() const;
  std::uint64_t hash() const;
  bool equals(const Formula& other) const;

 private:
  explicit Formula(std::shared_ptr<const Node> p) : ptr_(std::move(p)) {}
  std::shared_ptr<const Node> ptr_;
  friend Formula make_node(Node n);
};

inline bool operator==(const Formula& a, const Formula& b) { return a.equals(b); }
inline bool operator!=(const Formula& a, const Formula& b) { return !a.equals(b); }

struct Node {
  Kind kind;
  Logic logic;
  bool exists = false;             // quantifier polarity
  std::string prop;                // LabeledAtom/PropAtom/PropQuant
  std::string tvar;                // LabeledAtom label, TraceQuant variable
  std::optional<SetVar> set;       // SetQuant variable, TraceQuant domain
  Formula a, b;
  std::uint64_t hash = 0;
};

// ---- constructors (validate per-logic legality, throw LogicViolation) ----

Formula labeled_atom(Logic logic, const std::string& prop, const std::string& tvar);
Formula prop_atom(const std::string& prop);
Formula axiom_plus_times();
Formula lnot(Formula f);
Formula lor(Formula a, Formula b);
Formula land(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula next(Formula f);
Formula eventually(Formula f);
Formula always(Formula f);
Formula until(Formula a, Formula b);
Formula exists_trace(const std::string& v, Formula body);
Formula forall_trace(const std::string& v, Formula body);
Formula exists_trace_in(const std::string& v, const SetVar& domain, Formula body);
Formula forall_trace_in(const std::string& v, const SetVar& domain, Formula body);
Formula exists_prop(const std::string& q, Formula body);
Formula forall_prop(const std::string& q, Formula body);
Formula exists_set(const SetVar& x, Formula body);
Formula forall_set(const SetVar& x, Formula body);

/// Left-associated conjunction of a nonempty list.
Formula conj(const std::vector<Formula>& fs);

// ---- queries ----

struct FreeVars {
  std::set<std::string> trace_vars;
  std::set<std::string> props;      // unlabeled occurrences only
  std::set<std::string> set_vars;   // includes Xa/Xd when referenced free
};

FreeVars free_vars(const Formula& f);

/// Every identifier appearing anywhere: all prop names (labeled, unlabeled,
/// quantified), all trace variables, all set variables.
struct NameSets {
  std::set<std::string> props;
  std::set<std::string> trace_vars;
  std::set<std::string> set_vars;
};
NameSets all_names(const Formula& f);

/// All proposition names mentioned (labeled atoms, unlabeled atoms, and
/// propositional quantifiers), in first-occurrence order.
std::vector<std::string> props_in_order(const Formula& f);

bool check_sentence(const Formula& f);
bool is_quantifier_free(const Formula& f);
bool has_quantifier(const Formula& f);
std::size_t node_count(const Formula& f);

/// Pre-order search for the first labeled atom; used to synthesize the
/// "true" constant when desugaring F/G in Hyper2LTL.
Formula first_labeled_atom(const Formula& f);

// ---- transformations ----

/// Rewrite to the logic's core connectives. HyperQPTL/HyperQPTL+: {!, |, X, F};
/// Hyper2LTL: {!, |, X, U}. Until over the QPTL-style logics is encoded with a
/// fresh quantified proposition marking the suffix from the witness position.
Formula expand_sugar(const Formula& f);

/// Alpha-rename so every variable and proposition is quantified at most once
/// and bound names collide with nothing else in the formula.
Formula rename_apart(const Formula& f);

/// Quantifier prefix + quantifier-free matrix. Quantifiers are hoisted in
/// pre-order encounter order after rename_apart; fails if a quantifier sits
/// under a temporal operator.
Formula to_prenex(const Formula& f);

Formula make_node(Node n);

}  // namespace hyperq
