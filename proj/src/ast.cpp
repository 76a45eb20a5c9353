// SPDX-License-Identifier: Apache-2.0
#include "hyperq/ast.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "hyperq/trace.hpp"  // hash_combine / hash_string

namespace hyperq {

std::string to_string(Logic logic) {
  switch (logic) {
    case Logic::HyperQPTL: return "hyperqptl";
    case Logic::HyperQPTLPlus: return "hqptl+";
    case Logic::Hyper2LTL: return "h2l";
  }
  return "?";
}

SetVar::SetVar(std::string n) : name(std::move(n)) {
  if (name.empty()) throw LogicViolation("empty set variable name");
  if (name == "Xa") flag = SetFlag::All;
  if (name == "Xd") flag = SetFlag::Discourse;
}

Logic Formula::logic() const { return ptr_->logic; }
Kind Formula::kind() const { return ptr_->kind; }
std::uint64_t Formula::hash() const { return ptr_->hash; }

bool Formula::equals(const Formula& other) const {
  if (ptr_ == other.ptr_) return true;
  if (!ptr_ || !other.ptr_) return false;
  const Node& x = *ptr_;
  const Node& y = *other.ptr_;
  if (x.hash != y.hash || x.kind != y.kind || x.logic != y.logic ||
      x.exists != y.exists || x.prop != y.prop || x.tvar != y.tvar) {
    return false;
  }
  if (x.set.has_value() != y.set.has_value()) return false;
  if (x.set && !(*x.set == *y.set)) return false;
  if (static_cast<bool>(x.a) != static_cast<bool>(y.a)) return false;
  if (x.a && !x.a.equals(y.a)) return false;
  if (static_cast<bool>(x.b) != static_cast<bool>(y.b)) return false;
  if (x.b && !x.b.equals(y.b)) return false;
  return true;
}

Formula make_node(Node n) {
  std::uint64_t h = hash_combine(static_cast<std::uint64_t>(n.kind) * 31 + 7,
                                 static_cast<std::uint64_t>(n.logic));
  h = hash_combine(h, n.exists ? 2 : 1);
  h = hash_combine(h, hash_string(n.prop));
  h = hash_combine(h, hash_string(n.tvar));
  if (n.set) h = hash_combine(h, hash_string(n.set->name));
  if (n.a) h = hash_combine(h, n.a.hash());
  if (n.b) h = hash_combine(h, n.b.hash());
  n.hash = h;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

namespace {

void require_name(const std::string& n, const char* what) {
  if (n.empty()) throw LogicViolation(std::string("empty ") + what);
  if (n == "Xa" || n == "Xd") {
    throw LogicViolation("'" + n + "' is reserved for distinguished set variables");
  }
}

void require_same_logic(const Formula& a, const Formula& b) {
  if (a.logic() != b.logic()) {
    throw LogicViolation("mixing subformulas of " + to_string(a.logic()) + " and " +
                         to_string(b.logic()));
  }
}

Formula unary(Kind k, Formula f) {
  Node n;
  n.kind = k;
  n.logic = f.logic();
  n.a = std::move(f);
  return make_node(std::move(n));
}

Formula binary(Kind k, Formula a, Formula b) {
  require_same_logic(a, b);
  Node n;
  n.kind = k;
  n.logic = a.logic();
  n.a = std::move(a);
  n.b = std::move(b);
  return make_node(std::move(n));
}

Formula trace_quant(bool exists, const std::string& v, std::optional<SetVar> domain,
                    Formula body) {
  require_name(v, "trace variable");
  if (body.logic() == Logic::Hyper2LTL && !domain) {
    throw LogicViolation("Hyper2LTL trace quantifiers need an 'in X' domain");
  }
  if (body.logic() != Logic::Hyper2LTL && domain) {
    throw LogicViolation(to_string(body.logic()) +
                         " trace quantifiers take no 'in X' domain");
  }
  Node n;
  n.kind = Kind::TraceQuant;
  n.logic = body.logic();
  n.exists = exists;
  n.tvar = v;
  n.set = std::move(domain);
  n.a = std::move(body);
  return make_node(std::move(n));
}

Formula prop_quant(bool exists, const std::string& q, Formula body) {
  require_name(q, "proposition");
  if (body.logic() == Logic::Hyper2LTL) {
    throw LogicViolation("Hyper2LTL has no propositional quantifiers");
  }
  Node n;
  n.kind = Kind::PropQuant;
  n.logic = body.logic();
  n.exists = exists;
  n.prop = q;
  n.a = std::move(body);
  return make_node(std::move(n));
}

Formula set_quant(bool exists, const SetVar& x, Formula body) {
  if (body.logic() != Logic::Hyper2LTL) {
    throw LogicViolation(to_string(body.logic()) + " has no set quantifiers");
  }
  if (x.distinguished()) {
    throw LogicViolation("distinguished set variable " + x.name +
                         " cannot be quantified");
  }
  Node n;
  n.kind = Kind::SetQuant;
  n.logic = Logic::Hyper2LTL;
  n.exists = exists;
  n.set = x;
  n.a = std::move(body);
  return make_node(std::move(n));
}

}  // namespace

Formula labeled_atom(Logic logic, const std::string& prop, const std::string& tvar) {
  require_name(prop, "proposition");
  require_name(tvar, "trace variable");
  Node n;
  n.kind = Kind::LabeledAtom;
  n.logic = logic;
  n.prop = prop;
  n.tvar = tvar;
  return make_node(std::move(n));
}

Formula prop_atom(const std::string& prop) {
  require_name(prop, "proposition");
  Node n;
  n.kind = Kind::PropAtom;
  n.logic = Logic::HyperQPTL;
  n.prop = prop;
  return make_node(std::move(n));
}

Formula axiom_plus_times() {
  Node n;
  n.kind = Kind::AxiomPlusTimes;
  n.logic = Logic::HyperQPTL;
  return make_node(std::move(n));
}

Formula lnot(Formula f) { return unary(Kind::Not, std::move(f)); }
Formula next(Formula f) { return unary(Kind::Next, std::move(f)); }
Formula eventually(Formula f) { return unary(Kind::Eventually, std::move(f)); }
Formula always(Formula f) { return unary(Kind::Always, std::move(f)); }
Formula lor(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
Formula land(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) {
  return binary(Kind::Implies, std::move(a), std::move(b));
}
Formula iff(Formula a, Formula b) { return binary(Kind::Iff, std::move(a), std::move(b)); }
Formula until(Formula a, Formula b) {
  return binary(Kind::Until, std::move(a), std::move(b));
}

Formula exists_trace(const std::string& v, Formula body) {
  return trace_quant(true, v, std::nullopt, std::move(body));
}
Formula forall_trace(const std::string& v, Formula body) {
  return trace_quant(false, v, std::nullopt, std::move(body));
}
Formula exists_trace_in(const std::string& v, const SetVar& domain, Formula body) {
  return trace_quant(true, v, domain, std::move(body));
}
Formula forall_trace_in(const std::string& v, const SetVar& domain, Formula body) {
  return trace_quant(false, v, domain, std::move(body));
}
Formula exists_prop(const std::string& q, Formula body) {
  return prop_quant(true, q, std::move(body));
}
Formula forall_prop(const std::string& q, Formula body) {
  return prop_quant(false, q, std::move(body));
}
Formula exists_set(const SetVar& x, Formula body) {
  return set_quant(true, x, std::move(body));
}
Formula forall_set(const SetVar& x, Formula body) {
  return set_quant(false, x, std::move(body));
}

Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) throw Error("conj of an empty list");
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = land(out, fs[i]);
  return out;
}

namespace {

void collect_free(const Node& n, std::vector<std::string>& bound_traces,
                  std::vector<std::string>& bound_props,
                  std::vector<std::string>& bound_sets, FreeVars& out) {
  auto is_bound = [](const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  switch (n.kind) {
    case Kind::LabeledAtom:
      if (!is_bound(bound_traces, n.tvar)) out.trace_vars.insert(n.tvar);
      return;
    case Kind::PropAtom:
      if (!is_bound(bound_props, n.prop)) out.props.insert(n.prop);
      return;
    case Kind::AxiomPlusTimes:
      return;
    case Kind::TraceQuant:
      if (n.set && !is_bound(bound_sets, n.set->name)) out.set_vars.insert(n.set->name);
      bound_traces.push_back(n.tvar);
      collect_free(n.a.node(), bound_traces, bound_props, bound_sets, out);
      bound_traces.pop_back();
      return;
    case Kind::PropQuant:
      bound_props.push_back(n.prop);
      collect_free(n.a.node(), bound_traces, bound_props, bound_sets, out);
      bound_props.pop_back();
      return;
    case Kind::SetQuant:
      bound_sets.push_back(n.set->name);
      collect_free(n.a.node(), bound_traces, bound_props, bound_sets, out);
      bound_sets.pop_back();
      return;
    default:
      if (n.a) collect_free(n.a.node(), bound_traces, bound_props, bound_sets, out);
      if (n.b) collect_free(n.b.node(), bound_traces, bound_props, bound_sets, out);
      return;
  }
}

}  // namespace

FreeVars free_vars(const Formula& f) {
  FreeVars out;
  std::vector<std::string> bt, bp, bs;
  collect_free(f.node(), bt, bp, bs, out);
  return out;
}

namespace {

void collect_names(const Node& n, NameSets& out) {
  if (!n.prop.empty()) out.props.insert(n.prop);
  if (!n.tvar.empty()) out.trace_vars.insert(n.tvar);
  if (n.set) out.set_vars.insert(n.set->name);
  if (n.a) collect_names(n.a.node(), out);
  if (n.b) collect_names(n.b.node(), out);
}

void collect_props_in_order(const Node& n, std::vector<std::string>& out) {
  if (!n.prop.empty() && std::find(out.begin(), out.end(), n.prop) == out.end()) {
    out.push_back(n.prop);
  }
  if (n.a) collect_props_in_order(n.a.node(), out);
  if (n.b) collect_props_in_order(n.b.node(), out);
}

}  // namespace

NameSets all_names(const Formula& f) {
  NameSets out;
  collect_names(f.node(), out);
  return out;
}

std::vector<std::string> props_in_order(const Formula& f) {
  std::vector<std::string> out;
  collect_props_in_order(f.node(), out);
  return out;
}

bool check_sentence(const Formula& f) {
  FreeVars fv = free_vars(f);
  if (!fv.trace_vars.empty() || !fv.props.empty()) return false;
  for (const auto& x : fv.set_vars) {
    if (x != "Xa" && x != "Xd") return false;
  }
  return true;
}

bool is_quantifier_free(const Formula& f) { return !has_quantifier(f); }

bool has_quantifier(const Formula& f) {
  const Node& n = f.node();
  if (n.kind == Kind::TraceQuant || n.kind == Kind::PropQuant ||
      n.kind == Kind::SetQuant) {
    return true;
  }
  if (n.a && has_quantifier(n.a)) return true;
  if (n.b && has_quantifier(n.b)) return true;
  return false;
}

std::size_t node_count(const Formula& f) {
  const Node& n = f.node();
  std::size_t c = 1;
  if (n.a) c += node_count(n.a);
  if (n.b) c += node_count(n.b);
  return c;
}

Formula first_labeled_atom(const Formula& f) {
  const Node& n = f.node();
  if (n.kind == Kind::LabeledAtom) return f;
  if (n.a) {
    if (Formula r = first_labeled_atom(n.a)) return r;
  }
  if (n.b) {
    if (Formula r = first_labeled_atom(n.b)) return r;
  }
  return Formula();
}

// ---------------------------------------------------------------------------
// expand_sugar
// ---------------------------------------------------------------------------

namespace {

struct SugarCtx {
  Logic logic;
  std::set<std::string> used_props;
  std::set<std::string> used_tvars;
  int counter = 0;

  std::string fresh_prop() {
    while (true) {
      std::string n = "u" + std::to_string(counter++);
      if (!used_props.count(n)) {
        used_props.insert(n);
        return n;
      }
    }
  }
  std::string fresh_tvar() {
    while (true) {
      std::string n = "pu" + std::to_string(counter++);
      if (!used_tvars.count(n)) {
        used_tvars.insert(n);
        return n;
      }
    }
  }
};

Formula core_and(Formula a, Formula b) { return lnot(lor(lnot(a), lnot(b))); }
Formula core_globally(Formula a) { return lnot(eventually(lnot(a))); }

/// Until via a quantified proposition marking the suffix starting at the
/// witness position: the marker row is upward closed, eventually set, the
/// left operand holds while it is unset, and the right operand holds at the
/// first set position.
Formula qptl_until(Formula a, Formula b, SugarCtx& ctx) {
  std::string u = ctx.fresh_prop();
  std::string w;
  Formula marker;
  if (ctx.logic == Logic::HyperQPTL) {
    marker = prop_atom(u);
  } else {
    w = ctx.fresh_tvar();
    marker = labeled_atom(ctx.logic, u, w);
  }
  Formula c1 = core_globally(lor(lnot(marker), next(marker)));
  Formula c2 = eventually(marker);
  Formula c3 = core_globally(lor(marker, a));
  Formula c4 = lor(lnot(marker), b);
  Formula c5 = core_globally(lor(lor(marker, lnot(next(marker))), next(b)));
  Formula body = core_and(core_and(core_and(core_and(c1, c2), c3), c4), c5);
  if (ctx.logic == Logic::HyperQPTLPlus) body = exists_trace(w, body);
  return exists_prop(u, body);
}

Formula h2l_truth(const Formula& sample_scope) {
  Formula atom = first_labeled_atom(sample_scope);
  if (!atom) throw LogicViolation("cannot synthesize a tautology without an atom");
  return lor(lnot(atom), atom);
}

Formula desugar(const Formula& f, SugarCtx& ctx) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::LabeledAtom:
    case Kind::PropAtom:
    case Kind::AxiomPlusTimes:
      return f;
    case Kind::Not:
      return lnot(desugar(n.a, ctx));
    case Kind::Or:
      return lor(desugar(n.a, ctx), desugar(n.b, ctx));
    case Kind::And:
      return core_and(desugar(n.a, ctx), desugar(n.b, ctx));
    case Kind::Implies:
      return lor(lnot(desugar(n.a, ctx)), desugar(n.b, ctx));
    case Kind::Iff: {
      Formula a = desugar(n.a, ctx);
      Formula b = desugar(n.b, ctx);
      return core_and(lor(lnot(a), b), lor(lnot(b), a));
    }
    case Kind::Next:
      return next(desugar(n.a, ctx));
    case Kind::Eventually: {
      Formula a = desugar(n.a, ctx);
      if (ctx.logic == Logic::Hyper2LTL) return until(h2l_truth(a), a);
      return eventually(a);
    }
    case Kind::Always: {
      Formula a = desugar(n.a, ctx);
      if (ctx.logic == Logic::Hyper2LTL) {
        return lnot(until(h2l_truth(a), lnot(a)));
      }
      return core_globally(a);
    }
    case Kind::Until: {
      Formula a = desugar(n.a, ctx);
      Formula b = desugar(n.b, ctx);
      if (ctx.logic == Logic::Hyper2LTL) return until(a, b);
      return qptl_until(a, b, ctx);
    }
    case Kind::TraceQuant: {
      Node out;
      out.kind = Kind::TraceQuant;
      out.logic = n.logic;
      out.exists = n.exists;
      out.tvar = n.tvar;
      out.set = n.set;
      out.a = desugar(n.a, ctx);
      return make_node(std::move(out));
    }
    case Kind::PropQuant:
      return n.exists ? exists_prop(n.prop, desugar(n.a, ctx))
                      : forall_prop(n.prop, desugar(n.a, ctx));
    case Kind::SetQuant:
      return n.exists ? exists_set(*n.set, desugar(n.a, ctx))
                      : forall_set(*n.set, desugar(n.a, ctx));
  }
  throw Error("unreachable");
}

}  // namespace

Formula expand_sugar(const Formula& f) {
  SugarCtx ctx;
  ctx.logic = f.logic();
  NameSets names = all_names(f);
  ctx.used_props = names.props;
  ctx.used_tvars = names.trace_vars;
  return desugar(f, ctx);
}

// ---------------------------------------------------------------------------
// rename_apart
// ---------------------------------------------------------------------------

namespace {

struct RenameCtx {
  NameSets all;
  FreeVars free;
  std::set<std::string> seen_trace_binders;
  std::set<std::string> seen_prop_binders;
  std::set<std::string> seen_set_binders;
  std::set<std::string> taken;  // every name unavailable for fresh picks

  std::string fresh(const std::string& base) {
    for (int k = 1;; ++k) {
      std::string n = base + std::to_string(k);
      if (!taken.count(n)) {
        taken.insert(n);
        return n;
      }
    }
  }

  bool prop_pool(const std::string& n) const { return all.props.count(n) > 0; }
  bool trace_pool(const std::string& n) const { return all.trace_vars.count(n) > 0; }
  bool set_pool(const std::string& n) const { return all.set_vars.count(n) > 0; }
};

using Env = std::map<std::string, std::string>;

Formula rename_walk(const Formula& f, RenameCtx& ctx, Env& traces, Env& props,
                    Env& sets) {
  const Node& n = f.node();
  auto subst = [](const Env& env, const std::string& name) {
    auto it = env.find(name);
    return it == env.end() ? name : it->second;
  };
  switch (n.kind) {
    case Kind::LabeledAtom:
      return labeled_atom(n.logic, subst(props, n.prop), subst(traces, n.tvar));
    case Kind::PropAtom:
      return prop_atom(subst(props, n.prop));
    case Kind::AxiomPlusTimes:
      return f;
    case Kind::TraceQuant: {
      std::string v = n.tvar;
      bool clash = ctx.seen_trace_binders.count(v) || ctx.prop_pool(v) ||
                   ctx.set_pool(v) || ctx.free.trace_vars.count(v);
      std::string v2 = clash ? ctx.fresh(v) : v;
      ctx.seen_trace_binders.insert(v2);
      ctx.taken.insert(v2);
      auto saved = traces.find(v) != traces.end()
                       ? std::optional<std::string>(traces[v])
                       : std::nullopt;
      traces[v] = v2;
      std::optional<SetVar> domain;
      if (n.set) domain = SetVar(subst(sets, n.set->name));
      Formula body = rename_walk(n.a, ctx, traces, props, sets);
      if (saved) traces[v] = *saved; else traces.erase(v);
      Node out;
      out.kind = Kind::TraceQuant;
      out.logic = n.logic;
      out.exists = n.exists;
      out.tvar = v2;
      out.set = std::move(domain);
      out.a = std::move(body);
      return make_node(std::move(out));
    }
    case Kind::PropQuant: {
      std::string q = n.prop;
      bool clash = ctx.seen_prop_binders.count(q) || ctx.trace_pool(q) ||
                   ctx.set_pool(q) || ctx.free.props.count(q);
      std::string q2 = clash ? ctx.fresh(q) : q;
      ctx.seen_prop_binders.insert(q2);
      ctx.taken.insert(q2);
      auto saved = props.find(q) != props.end() ? std::optional<std::string>(props[q])
                                                : std::nullopt;
      props[q] = q2;
      Formula body = rename_walk(n.a, ctx, traces, props, sets);
      if (saved) props[q] = *saved; else props.erase(q);
      return n.exists ? exists_prop(q2, std::move(body))
                      : forall_prop(q2, std::move(body));
    }
    case Kind::SetQuant: {
      std::string x = n.set->name;
      bool clash = ctx.seen_set_binders.count(x) || ctx.trace_pool(x) ||
                   ctx.prop_pool(x) || ctx.free.set_vars.count(x);
      std::string x2 = clash ? ctx.fresh(x) : x;
      ctx.seen_set_binders.insert(x2);
      ctx.taken.insert(x2);
      auto saved = sets.find(x) != sets.end() ? std::optional<std::string>(sets[x])
                                              : std::nullopt;
      sets[x] = x2;
      Formula body = rename_walk(n.a, ctx, traces, props, sets);
      if (saved) sets[x] = *saved; else sets.erase(x);
      return n.exists ? exists_set(SetVar(x2), std::move(body))
                      : forall_set(SetVar(x2), std::move(body));
    }
    default: {
      Node out;
      out.kind = n.kind;
      out.logic = n.logic;
      out.exists = n.exists;
      if (n.a) out.a = rename_walk(n.a, ctx, traces, props, sets);
      if (n.b) out.b = rename_walk(n.b, ctx, traces, props, sets);
      return make_node(std::move(out));
    }
  }
}

}  // namespace

Formula rename_apart(const Formula& f) {
  RenameCtx ctx;
  ctx.all = all_names(f);
  ctx.free = free_vars(f);
  for (const auto& n : ctx.all.props) ctx.taken.insert(n);
  for (const auto& n : ctx.all.trace_vars) ctx.taken.insert(n);
  for (const auto& n : ctx.all.set_vars) ctx.taken.insert(n);
  Env t, p, s;
  return rename_walk(f, ctx, t, p, s);
}

// ---------------------------------------------------------------------------
// to_prenex
// ---------------------------------------------------------------------------

namespace {

struct PrefixEntry {
  Kind kind;
  bool exists;
  std::string name;
  std::optional<SetVar> domain;
};

bool quantifier_under_temporal(const Formula& f, Formula* offender) {
  const Node& n = f.node();
  bool temporal = n.kind == Kind::Next || n.kind == Kind::Eventually ||
                  n.kind == Kind::Always || n.kind == Kind::Until;
  if (temporal) {
    if (n.a && has_quantifier(n.a)) {
      *offender = n.a;
      return true;
    }
    if (n.b && has_quantifier(n.b)) {
      *offender = n.b;
      return true;
    }
  }
  if (n.a && quantifier_under_temporal(n.a, offender)) return true;
  if (n.b && quantifier_under_temporal(n.b, offender)) return true;
  return false;
}

/// Replace every Iff with a quantified operand by the pair of implications,
/// so hoisting only crosses monotone or antitone contexts.
Formula lower_quantified_iff(const Formula& f) {
  const Node& n = f.node();
  Formula a = n.a ? lower_quantified_iff(n.a) : Formula();
  Formula b = n.b ? lower_quantified_iff(n.b) : Formula();
  if (n.kind == Kind::Iff && (has_quantifier(a) || has_quantifier(b))) {
    return land(implies(a, b), implies(b, a));
  }
  Node out;
  out.kind = n.kind;
  out.logic = n.logic;
  out.exists = n.exists;
  out.prop = n.prop;
  out.tvar = n.tvar;
  out.set = n.set;
  out.a = std::move(a);
  out.b = std::move(b);
  return make_node(std::move(out));
}

Formula hoist(const Formula& f, bool flipped, std::vector<PrefixEntry>& prefix) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::TraceQuant: {
      prefix.push_back({Kind::TraceQuant, flipped ? !n.exists : n.exists, n.tvar, n.set});
      return hoist(n.a, flipped, prefix);
    }
    case Kind::PropQuant: {
      prefix.push_back({Kind::PropQuant, flipped ? !n.exists : n.exists, n.prop,
                        std::nullopt});
      return hoist(n.a, flipped, prefix);
    }
    case Kind::SetQuant: {
      prefix.push_back({Kind::SetQuant, flipped ? !n.exists : n.exists, n.set->name,
                        n.set});
      return hoist(n.a, flipped, prefix);
    }
    case Kind::Not:
      return lnot(hoist(n.a, !flipped, prefix));
    case Kind::Or:
    case Kind::And: {
      Formula a = hoist(n.a, flipped, prefix);
      Formula b = hoist(n.b, flipped, prefix);
      return n.kind == Kind::Or ? lor(std::move(a), std::move(b))
                                : land(std::move(a), std::move(b));
    }
    case Kind::Implies: {
      Formula a = hoist(n.a, !flipped, prefix);
      Formula b = hoist(n.b, flipped, prefix);
      return implies(std::move(a), std::move(b));
    }
    default:
      return f;  // temporal/atom subtrees are quantifier-free by precondition
  }
}

}  // namespace

Formula to_prenex(const Formula& f) {
  Formula offender;
  if (quantifier_under_temporal(f, &offender)) {
    throw ShapeError("quantifier under a temporal operator");
  }
  Formula g = rename_apart(lower_quantified_iff(f));
  std::vector<PrefixEntry> prefix;
  Formula matrix = hoist(g, false, prefix);
  Formula out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    switch (it->kind) {
      case Kind::TraceQuant: {
        Node n;
        n.kind = Kind::TraceQuant;
        n.logic = out.logic();
        n.exists = it->exists;
        n.tvar = it->name;
        n.set = it->domain;
        n.a = out;
        out = make_node(std::move(n));
        break;
      }
      case Kind::PropQuant:
        out = it->exists ? exists_prop(it->name, out) : forall_prop(it->name, out);
        break;
      case Kind::SetQuant:
        out = it->exists ? exists_set(*it->domain, out) : forall_set(*it->domain, out);
        break;
      default:
        throw Error("unreachable");
    }
  }
  return out;
}

}  // namespace hyperq
