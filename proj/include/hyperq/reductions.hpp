// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hyperq/arith_formula.hpp"
#include "hyperq/ast.hpp"
#include "hyperq/trace.hpp"

namespace hyperq {

/// Fresh-name supply for a translation; generated names never collide with
/// the input formula's names.
class ReductionContext {
 public:
  ReductionContext() = default;
  explicit ReductionContext(std::set<std::string> used) : used_(std::move(used)) {}

  void reserve(const std::string& name) { used_.insert(name); }
  bool taken(const std::string& name) const { return used_.count(name) > 0; }

  /// Returns `base` itself when free, otherwise base with a numeric suffix.
  std::string fresh(const std::string& base) {
    if (!used_.count(base)) {
      used_.insert(base);
      return base;
    }
    for (int k = 1;; ++k) {
      std::string n = base + std::to_string(k);
      if (!used_.count(n)) {
        used_.insert(n);
        return n;
      }
    }
  }

  const std::set<std::string>& generated() const { return generated_; }
  std::string fresh_tracked(const std::string& base) {
    std::string n = fresh(base);
    generated_.insert(n);
    return n;
  }

 private:
  std::set<std::string> used_;
  std::set<std::string> generated_;
};

// ---- Sigma^2_1 arithmetic -> HyperQPTL (Lemma 1 machinery) ----

/// forallP q . exists pi . G(q <-> x[pi])
Formula build_theta_all();

/// Conjunction over j = 1..k of
///   forall pi . X G !mj[pi] & forall pi' . (G(x[pi] <-> x[pi']) -> (mj[pi] <-> mj[pi']))
/// k = 0 is represented by dropping the conjunct entirely (callers omit it).
Formula build_theta_cons(std::size_t k);

/// Membership in T_{(+,*)}: unique arg1/arg2/res positions, add xor mult
/// uniformly, and the positions satisfy the selected operation.
bool t_plus_times_member(const LassoTrace& t);

/// The hyp(.) translation of a first/second-order arithmetic formula into
/// HyperQPTL over {x, m_j, arg1, arg2, res, add, mult}; marker_index maps
/// third-order variable names to their 1-based marker number.
Formula hyp(const ArithFormula& psi, const std::map<std::string, std::size_t>& marker_index);

/// theta_all & theta_cons(k) & AXIOM_PLUS_TIMES & hyp(psi), prenexed.
/// Accepts Sigma^2_1 sentences, also with first/second-order existentials
/// wrapped around the third-order block (they are hoisted inward-out first).
Formula sigma21_to_hyperqptl(const ArithFormula& phi);

/// sigma21_to_hyperqptl(exists1 x . theta_{=n}(x) & phi(x)).
Formula instance_formula(std::uint64_t n, const ArithFormula& phi_x,
                         const std::string& free_var = "x");

// ---- Hyper2LTL -> HyperQPTL+ (Lemma 3) ----

struct Lemma3Names {
  std::vector<std::string> props;       // p_1..p_n in first-occurrence order
  std::vector<std::string> all_props;   // p_j^all
  std::vector<std::string> temp_props;  // p_j^temp
  std::map<std::string, std::string> marker;  // set var -> m_j
  std::string pi, pi2;                  // the display's pi and pi'
};

/// forallP temps ... forall pi . exists pi' . /\_j G(tempj[pi] <-> allj[pi'])
Formula lemma3_theta_complete(const Lemma3Names& names);

/// forall pi . X G !m[pi] & forall pi' . (/\_l G(all_l[pi] <-> all_l[pi']) -> (m[pi] <-> m[pi']))
Formula lemma3_theta_cons_j(const Lemma3Names& names, const std::string& marker);

/// replace(pi, psi): each original-proposition atom labeled by pi switches to
/// the matching fresh "all" proposition.
Formula lemma3_replace(const Formula& psi, const std::string& pi,
                       const Lemma3Names& names);

/// The f' case analysis (13 displayed cases; other connectives homomorphic).
Formula lemma3_fprime(const Formula& phi, const Lemma3Names& names);

/// Full translation: exists all-props . (theta_complete & f'(phi)), prenexed.
Formula h2l_to_hqptlplus(const Formula& phi);
/// The same before the final prenex step (used by structural checks).
Formula h2l_to_hqptlplus_nested(const Formula& phi);

// ---- HyperQPTL+ -> Hyper2LTL (Lemma 4) ----

/// theta_q(A, B): both inclusions of the (ap minus q)-projection equality,
/// as two forall/exists blocks of G-biconditionals.
Formula lemma4_theta_q(const std::string& q, const SetVar& A, const SetVar& B,
                       const std::vector<std::string>& ap, const std::string& pi,
                       const std::string& pi2);

/// The f'(., b) case analysis; `current` is the set variable holding the set
/// the trace quantifiers range over (X_d at b = 0, a fresh variable after
/// each propositional quantifier).
Formula lemma4_fprime(const Formula& phi, const SetVar& current,
                      const std::vector<std::string>& ap, ReductionContext& ctx);

Formula hqptlplus_to_h2l(const Formula& phi);
Formula hqptlplus_to_h2l_nested(const Formula& phi);

/// Max over all subformulas of the number of distinct set variables free in
/// that subformula; 2 means "X_d plus one live variable" in the paper's sense.
std::size_t max_live_set_vars(const Formula& f);

}  // namespace hyperq
