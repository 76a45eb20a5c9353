// SPDX-License-Identifier: Apache-2.0
#include "hyperq/reductions.hpp"

#include "hyperq/arith.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace hyperq {

namespace {
constexpr Logic Q = Logic::HyperQPTL;

Formula x_at(const std::string& tv) { return labeled_atom(Q, "x", tv); }

/// (!x[pi]) U (x[pi] & X G !x[pi]): the trace bound to pi carries x exactly once.
Formula singleton_guard(const std::string& tv) {
  return until(lnot(x_at(tv)), land(x_at(tv), next(always(lnot(x_at(tv))))));
}
}  // namespace

Formula build_theta_all() {
  return forall_prop(
      "q", exists_trace("pi", always(iff(prop_atom("q"), x_at("pi")))));
}

Formula build_theta_cons(std::size_t k) {
  if (k == 0) throw ShapeError("theta_cons needs k >= 1; k = 0 is the empty conjunct");
  std::vector<Formula> conjuncts;
  for (std::size_t j = 1; j <= k; ++j) {
    std::string m = "m" + std::to_string(j);
    Formula first = next(always(lnot(labeled_atom(Q, m, "pi"))));
    Formula same_x = always(iff(x_at("pi"), x_at("pi'")));
    Formula same_mark = iff(labeled_atom(Q, m, "pi"), labeled_atom(Q, m, "pi'"));
    Formula second = forall_trace("pi'", implies(same_x, same_mark));
    conjuncts.push_back(forall_trace("pi", land(first, second)));
  }
  return conj(conjuncts);
}

bool t_plus_times_member(const LassoTrace& t) {
  static const std::vector<std::string> required = {"arg1", "arg2", "res", "add",
                                                    "mult"};
  for (const auto& p : required) {
    if (!t.alphabet().contains(p)) {
      throw AlphabetError("trace alphabet lacks '" + p + "'");
    }
  }
  // a proposition in the loop holds infinitely often, so unique occurrence
  // means: absent from the loop, present at exactly one stem position
  auto unique_pos = [&](const std::string& p) -> std::optional<std::size_t> {
    std::size_t idx = *t.alphabet().index_of(p);
    for (Letter l : t.loop()) {
      if ((l >> idx) & 1u) return std::nullopt;
    }
    std::optional<std::size_t> pos;
    for (std::size_t i = 0; i < t.stem_size(); ++i) {
      if ((t.stem()[i] >> idx) & 1u) {
        if (pos) return std::nullopt;
        pos = i;
      }
    }
    return pos;
  };
  auto everywhere = [&](const std::string& p) {
    std::size_t idx = *t.alphabet().index_of(p);
    for (Letter l : t.stem()) {
      if (!((l >> idx) & 1u)) return false;
    }
    for (Letter l : t.loop()) {
      if (!((l >> idx) & 1u)) return false;
    }
    return true;
  };
  auto nowhere = [&](const std::string& p) {
    std::size_t idx = *t.alphabet().index_of(p);
    for (Letter l : t.stem()) {
      if ((l >> idx) & 1u) return false;
    }
    for (Letter l : t.loop()) {
      if ((l >> idx) & 1u) return false;
    }
    return true;
  };
  auto n1 = unique_pos("arg1");
  auto n2 = unique_pos("arg2");
  auto n3 = unique_pos("res");
  if (!n1 || !n2 || !n3) return false;
  if (everywhere("add") && nowhere("mult")) return *n1 + *n2 == *n3;
  if (everywhere("mult") && nowhere("add")) return *n1 * *n2 == *n3;
  return false;
}

namespace {

std::string pi_of(const std::string& arith_var) { return "pi_" + arith_var; }

Formula hyp_rec(const ArithFormula& psi,
                const std::map<std::string, std::size_t>& markers) {
  const ANode& n = psi.node();
  switch (n.kind) {
    case AKind::Quant: {
      if (n.order == 3) {
        throw ShapeError("third-order quantifier inside hyp's argument");
      }
      Formula body = hyp_rec(n.a, markers);
      std::string tv = pi_of(n.x);
      if (n.order == 2) {
        return n.exists ? exists_trace(tv, body) : forall_trace(tv, body);
      }
      Formula guard = singleton_guard(tv);
      return n.exists ? exists_trace(tv, land(guard, body))
                      : forall_trace(tv, implies(guard, body));
    }
    case AKind::Or:
      return lor(hyp_rec(n.a, markers), hyp_rec(n.b, markers));
    case AKind::Not:
      return lnot(hyp_rec(n.a, markers));
    case AKind::And:
      return land(hyp_rec(n.a, markers), hyp_rec(n.b, markers));
    case AKind::Implies:
      return implies(hyp_rec(n.a, markers), hyp_rec(n.b, markers));
    case AKind::Iff:
      return iff(hyp_rec(n.a, markers), hyp_rec(n.b, markers));
    case AKind::InFamily: {
      auto it = markers.find(n.y);
      if (it == markers.end()) {
        throw ShapeError("third-order variable '" + n.y + "' has no marker");
      }
      return labeled_atom(Q, "m" + std::to_string(it->second), pi_of(n.x));
    }
    case AKind::InSet:
      return eventually(land(x_at(pi_of(n.x)), x_at(pi_of(n.y))));
    case AKind::Less:
      return eventually(land(x_at(pi_of(n.x)), next(eventually(x_at(pi_of(n.y))))));
    case AKind::SumEq:
    case AKind::ProdEq: {
      Formula tag = labeled_atom(Q, n.kind == AKind::SumEq ? "add" : "mult", "pi");
      Formula f1 = eventually(land(x_at(pi_of(n.x)), labeled_atom(Q, "arg1", "pi")));
      Formula f2 = eventually(land(x_at(pi_of(n.y)), labeled_atom(Q, "arg2", "pi")));
      Formula f3 = eventually(land(x_at(pi_of(n.z)), labeled_atom(Q, "res", "pi")));
      return exists_trace("pi", land(land(land(tag, f1), f2), f3));
    }
  }
  throw Error("unreachable");
}

/// Hoists existential third-order quantifiers to the front, across other
/// existential quantifiers and conjunctions with third-order-free siblings.
ArithFormula pull_third_order(const ArithFormula& f, std::vector<std::string>& vars) {
  const ANode& n = f.node();
  if (n.kind == AKind::Quant && n.exists && n.order == 3) {
    vars.push_back(n.x);
    return pull_third_order(n.a, vars);
  }
  if (n.kind == AKind::Quant && n.exists && arith_has_third_order(n.a)) {
    ArithFormula body = pull_third_order(n.a, vars);
    return a_exists(n.order, n.x, body);
  }
  if (n.kind == AKind::And && arith_has_third_order(f)) {
    bool left = arith_has_third_order(n.a);
    bool right = arith_has_third_order(n.b);
    if (left && right) {
      throw ShapeError("third-order quantifiers in both conjuncts; not Sigma^2_1");
    }
    if (left) return a_and(pull_third_order(n.a, vars), n.b);
    return a_and(n.a, pull_third_order(n.b, vars));
  }
  if (arith_has_third_order(f)) {
    throw ShapeError("formula is not Sigma^2_1: third-order quantifier in a "
                     "non-existential position");
  }
  return f;
}

}  // namespace

Formula hyp(const ArithFormula& psi,
            const std::map<std::string, std::size_t>& marker_index) {
  return hyp_rec(psi, marker_index);
}

Formula sigma21_to_hyperqptl(const ArithFormula& phi) {
  ArithFormula renamed = rename_apart_arith(phi);
  std::vector<std::string> third_vars;
  ArithFormula body = pull_third_order(renamed, third_vars);
  std::map<std::string, std::size_t> markers;
  for (std::size_t j = 0; j < third_vars.size(); ++j) {
    markers[third_vars[j]] = j + 1;
  }
  std::vector<Formula> parts;
  parts.push_back(build_theta_all());
  if (!third_vars.empty()) parts.push_back(build_theta_cons(third_vars.size()));
  parts.push_back(axiom_plus_times());
  parts.push_back(hyp(body, markers));
  return to_prenex(conj(parts));
}

Formula instance_formula(std::uint64_t n, const ArithFormula& phi_x,
                         const std::string& free_var) {
  ArithFormula theta = build_theta_eq_n(n, free_var);
  return sigma21_to_hyperqptl(a_exists(1, free_var, a_and(theta, phi_x)));
}

// ---------------------------------------------------------------------------
// Lemma 3: Hyper2LTL -> HyperQPTL+
// ---------------------------------------------------------------------------

namespace {
constexpr Logic QP = Logic::HyperQPTLPlus;

Lemma3Names lemma3_names(const Formula& phi, ReductionContext& ctx) {
  Lemma3Names names;
  names.props = props_in_order(phi);
  for (const auto& p : names.props) {
    names.all_props.push_back(ctx.fresh_tracked(p + "_all"));
  }
  for (const auto& p : names.props) {
    names.temp_props.push_back(ctx.fresh_tracked(p + "_temp"));
  }
  std::size_t j = 0;
  std::function<void(const Formula&)> collect = [&](const Formula& f) {
    const Node& n = f.node();
    if (n.kind == Kind::SetQuant) {
      if (!names.marker.count(n.set->name)) {
        names.marker[n.set->name] = ctx.fresh_tracked("m" + std::to_string(++j));
      }
    }
    if (n.a) collect(n.a);
    if (n.b) collect(n.b);
  };
  collect(phi);
  names.pi = ctx.fresh_tracked("pi");
  names.pi2 = ctx.fresh_tracked("pi'");
  return names;
}

}  // namespace

Formula lemma3_theta_complete(const Lemma3Names& names) {
  std::vector<Formula> conjuncts;
  for (std::size_t j = 0; j < names.props.size(); ++j) {
    conjuncts.push_back(always(iff(labeled_atom(QP, names.temp_props[j], names.pi),
                                   labeled_atom(QP, names.all_props[j], names.pi2))));
  }
  Formula body = forall_trace(names.pi, exists_trace(names.pi2, conj(conjuncts)));
  for (auto it = names.temp_props.rbegin(); it != names.temp_props.rend(); ++it) {
    body = forall_prop(*it, body);
  }
  return body;
}

Formula lemma3_theta_cons_j(const Lemma3Names& names, const std::string& marker) {
  Formula first = next(always(lnot(labeled_atom(QP, marker, names.pi))));
  std::vector<Formula> same_all;
  for (const auto& all : names.all_props) {
    same_all.push_back(always(
        iff(labeled_atom(QP, all, names.pi), labeled_atom(QP, all, names.pi2))));
  }
  Formula same_mark =
      iff(labeled_atom(QP, marker, names.pi), labeled_atom(QP, marker, names.pi2));
  Formula second = forall_trace(names.pi2, implies(conj(same_all), same_mark));
  return forall_trace(names.pi, land(first, second));
}

Formula lemma3_replace(const Formula& psi, const std::string& pi,
                       const Lemma3Names& names) {
  const Node& n = psi.node();
  if (n.kind == Kind::LabeledAtom && n.tvar == pi) {
    auto it = std::find(names.props.begin(), names.props.end(), n.prop);
    if (it != names.props.end()) {
      return labeled_atom(n.logic, names.all_props[it - names.props.begin()], pi);
    }
    return psi;
  }
  Node out;
  out.kind = n.kind;
  out.logic = n.logic;
  out.exists = n.exists;
  out.prop = n.prop;
  out.tvar = n.tvar;
  out.set = n.set;
  if (n.a) out.a = lemma3_replace(n.a, pi, names);
  if (n.b) out.b = lemma3_replace(n.b, pi, names);
  if (!n.a && !n.b) return psi;
  return make_node(std::move(out));
}

Formula lemma3_fprime(const Formula& phi, const Lemma3Names& names) {
  const Node& n = phi.node();
  switch (n.kind) {
    case Kind::SetQuant: {
      const std::string& m = names.marker.at(n.set->name);
      Formula cons = lemma3_theta_cons_j(names, m);
      Formula body = lemma3_fprime(n.a, names);
      return n.exists ? exists_prop(m, land(cons, body))
                      : forall_prop(m, implies(cons, body));
    }
    case Kind::TraceQuant: {
      switch (n.set->flag) {
        case SetFlag::Discourse: {
          Formula body = lemma3_fprime(n.a, names);
          return n.exists ? exists_trace(n.tvar, body) : forall_trace(n.tvar, body);
        }
        case SetFlag::All: {
          Formula body = lemma3_fprime(lemma3_replace(n.a, n.tvar, names), names);
          return n.exists ? exists_trace(n.tvar, body) : forall_trace(n.tvar, body);
        }
        case SetFlag::None: {
          const std::string& m = names.marker.at(n.set->name);
          Formula mark = labeled_atom(QP, m, n.tvar);
          Formula body = lemma3_fprime(lemma3_replace(n.a, n.tvar, names), names);
          return n.exists ? exists_trace(n.tvar, land(mark, body))
                          : forall_trace(n.tvar, implies(mark, body));
        }
      }
      throw Error("unreachable");
    }
    case Kind::LabeledAtom:
      return labeled_atom(QP, n.prop, n.tvar);
    case Kind::Not:
      return lnot(lemma3_fprime(n.a, names));
    case Kind::Or:
      return lor(lemma3_fprime(n.a, names), lemma3_fprime(n.b, names));
    case Kind::And:
      return land(lemma3_fprime(n.a, names), lemma3_fprime(n.b, names));
    case Kind::Implies:
      return implies(lemma3_fprime(n.a, names), lemma3_fprime(n.b, names));
    case Kind::Iff:
      return iff(lemma3_fprime(n.a, names), lemma3_fprime(n.b, names));
    case Kind::Next:
      return next(lemma3_fprime(n.a, names));
    case Kind::Eventually:
      return eventually(lemma3_fprime(n.a, names));
    case Kind::Always:
      return always(lemma3_fprime(n.a, names));
    case Kind::Until:
      return until(lemma3_fprime(n.a, names), lemma3_fprime(n.b, names));
    default:
      throw LogicViolation("unexpected node in a Hyper2LTL sentence");
  }
}

Formula h2l_to_hqptlplus_nested(const Formula& phi) {
  if (phi.logic() != Logic::Hyper2LTL) {
    throw LogicViolation("Lemma 3 translation expects a Hyper2LTL sentence");
  }
  if (!check_sentence(phi)) throw ShapeError("input is not a sentence");
  Formula renamed = rename_apart(phi);
  NameSets used = all_names(renamed);
  std::set<std::string> pool;
  pool.insert(used.props.begin(), used.props.end());
  pool.insert(used.trace_vars.begin(), used.trace_vars.end());
  pool.insert(used.set_vars.begin(), used.set_vars.end());
  ReductionContext ctx(std::move(pool));
  Lemma3Names names = lemma3_names(renamed, ctx);
  Formula body = land(lemma3_theta_complete(names), lemma3_fprime(renamed, names));
  for (auto it = names.all_props.rbegin(); it != names.all_props.rend(); ++it) {
    body = exists_prop(*it, body);
  }
  // freshness invariant: nothing generated occurs in the input
  for (const auto& g : ctx.generated()) {
    if (used.props.count(g) || used.trace_vars.count(g) || used.set_vars.count(g)) {
      throw Error("generated name '" + g + "' collides with the input");
    }
  }
  return body;
}

Formula h2l_to_hqptlplus(const Formula& phi) {
  return to_prenex(h2l_to_hqptlplus_nested(phi));
}

// ---------------------------------------------------------------------------
// Lemma 4: HyperQPTL+ -> Hyper2LTL
// ---------------------------------------------------------------------------

namespace {
constexpr Logic H2 = Logic::Hyper2LTL;

struct Lemma4State {
  std::vector<std::string> ap;
  std::string pi, pi2;
  ReductionContext* ctx;
  std::size_t counter = 0;

  SetVar next_var() {
    ++counter;
    return SetVar(ctx->fresh_tracked("X" + std::to_string(counter)));
  }
};

Formula lemma4_rec(const Formula& phi, const SetVar& current, Lemma4State& st);

}  // namespace

Formula lemma4_theta_q(const std::string& q, const SetVar& A, const SetVar& B,
                       const std::vector<std::string>& ap, const std::string& pi,
                       const std::string& pi2) {
  std::vector<Formula> conjuncts;
  for (const auto& p : ap) {
    if (p == q) continue;
    conjuncts.push_back(
        always(iff(labeled_atom(H2, p, pi), labeled_atom(H2, p, pi2))));
  }
  Formula inner;
  if (conjuncts.empty()) {
    // single-proposition alphabet: nothing to preserve, any relabeling of q
    // is admissible, so the body is a tautology on the bound variable
    Formula atom = labeled_atom(H2, q, pi);
    inner = lor(lnot(atom), atom);
  } else {
    inner = conj(conjuncts);
  }
  Formula block1 = forall_trace_in(pi, A, exists_trace_in(pi2, B, inner));
  Formula block2 = forall_trace_in(pi, B, exists_trace_in(pi2, A, inner));
  return land(block1, block2);
}

namespace {

Formula lemma4_rec(const Formula& phi, const SetVar& current, Lemma4State& st) {
  const Node& n = phi.node();
  switch (n.kind) {
    case Kind::TraceQuant: {
      Formula body = lemma4_rec(n.a, current, st);
      return n.exists ? exists_trace_in(n.tvar, current, body)
                      : forall_trace_in(n.tvar, current, body);
    }
    case Kind::PropQuant: {
      SetVar fresh = st.next_var();
      Formula theta = lemma4_theta_q(n.prop, fresh, current, st.ap, st.pi, st.pi2);
      Formula body = lemma4_rec(n.a, fresh, st);
      return n.exists ? exists_set(fresh, land(theta, body))
                      : forall_set(fresh, implies(theta, body));
    }
    case Kind::LabeledAtom:
      return labeled_atom(H2, n.prop, n.tvar);
    case Kind::Not:
      return lnot(lemma4_rec(n.a, current, st));
    case Kind::Or:
      return lor(lemma4_rec(n.a, current, st), lemma4_rec(n.b, current, st));
    case Kind::And:
      return land(lemma4_rec(n.a, current, st), lemma4_rec(n.b, current, st));
    case Kind::Implies:
      return implies(lemma4_rec(n.a, current, st), lemma4_rec(n.b, current, st));
    case Kind::Iff:
      return iff(lemma4_rec(n.a, current, st), lemma4_rec(n.b, current, st));
    case Kind::Next:
      return next(lemma4_rec(n.a, current, st));
    case Kind::Eventually:
      return eventually(lemma4_rec(n.a, current, st));
    case Kind::Always:
      return always(lemma4_rec(n.a, current, st));
    case Kind::Until:
      return until(lemma4_rec(n.a, current, st), lemma4_rec(n.b, current, st));
    default:
      throw LogicViolation("unexpected node in a HyperQPTL+ sentence");
  }
}

}  // namespace

Formula lemma4_fprime(const Formula& phi, const SetVar& current,
                      const std::vector<std::string>& ap, ReductionContext& ctx) {
  Lemma4State st;
  st.ap = ap;
  st.ctx = &ctx;
  st.pi = ctx.fresh_tracked("pi");
  st.pi2 = ctx.fresh_tracked("pi'");
  return lemma4_rec(phi, current, st);
}

Formula hqptlplus_to_h2l_nested(const Formula& phi) {
  if (phi.logic() != Logic::HyperQPTLPlus) {
    throw LogicViolation("Lemma 4 translation expects a HyperQPTL+ sentence");
  }
  if (!check_sentence(phi)) throw ShapeError("input is not a sentence");
  Formula renamed = rename_apart(phi);
  NameSets used = all_names(renamed);
  std::set<std::string> pool;
  pool.insert(used.props.begin(), used.props.end());
  pool.insert(used.trace_vars.begin(), used.trace_vars.end());
  pool.insert(used.set_vars.begin(), used.set_vars.end());
  ReductionContext ctx(std::move(pool));
  std::vector<std::string> ap(used.props.begin(), used.props.end());
  return lemma4_fprime(renamed, SetVar::discourse(), ap, ctx);
}

// The nested form is the deliverable: hoisting a membership quantifier past
// a connective is unsound when its set may be empty (forall pi in {} . P is
// true while exists pi in {} . anything is false), and Hyper2LTL set
// quantifiers range over all subsets including the empty one.
Formula hqptlplus_to_h2l(const Formula& phi) {
  return hqptlplus_to_h2l_nested(phi);
}

std::size_t max_live_set_vars(const Formula& f) {
  std::size_t best = 0;
  std::function<std::set<std::string>(const Formula&)> rec =
      [&](const Formula& g) -> std::set<std::string> {
    const Node& n = g.node();
    std::set<std::string> live;
    if (n.a) live = rec(n.a);
    if (n.b) {
      auto other = rec(n.b);
      live.insert(other.begin(), other.end());
    }
    if (n.kind == Kind::SetQuant) live.erase(n.set->name);
    if (n.kind == Kind::TraceQuant && n.set) live.insert(n.set->name);
    best = std::max(best, live.size());
    return live;
  };
  rec(f);
  return best;
}

}  // namespace hyperq
