// SPDX-License-Identifier: Apache-2.0
#include "hyperq/arith_formula.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "hyperq/trace.hpp"  // hash helpers

namespace hyperq {

AKind ArithFormula::kind() const { return ptr_->kind; }
std::uint64_t ArithFormula::hash() const { return ptr_->hash; }

bool ArithFormula::equals(const ArithFormula& other) const {
  if (ptr_ == other.ptr_) return true;
  if (!ptr_ || !other.ptr_) return false;
  const ANode& p = *ptr_;
  const ANode& q = *other.ptr_;
  if (p.hash != q.hash || p.kind != q.kind || p.exists != q.exists ||
      p.order != q.order || p.x != q.x || p.y != q.y || p.z != q.z) {
    return false;
  }
  if (static_cast<bool>(p.a) != static_cast<bool>(q.a)) return false;
  if (p.a && !p.a.equals(q.a)) return false;
  if (static_cast<bool>(p.b) != static_cast<bool>(q.b)) return false;
  if (p.b && !p.b.equals(q.b)) return false;
  return true;
}

ArithFormula make_anode(ANode n) {
  std::uint64_t h = hash_combine(static_cast<std::uint64_t>(n.kind) * 67 + 3,
                                 (n.exists ? 2 : 1) * 31 + n.order);
  h = hash_combine(h, hash_string(n.x));
  h = hash_combine(h, hash_string(n.y));
  h = hash_combine(h, hash_string(n.z));
  if (n.a) h = hash_combine(h, n.a.hash());
  if (n.b) h = hash_combine(h, n.b.hash());
  n.hash = h;
  return ArithFormula(std::make_shared<const ANode>(std::move(n)));
}

namespace {

void need(const std::string& v) {
  if (v.empty()) throw ShapeError("empty arithmetic variable name");
}

ArithFormula atom3(AKind k, const std::string& x, const std::string& y,
                   const std::string& z) {
  need(x);
  need(y);
  need(z);
  ANode n;
  n.kind = k;
  n.x = x;
  n.y = y;
  n.z = z;
  return make_anode(std::move(n));
}

ArithFormula atom2(AKind k, const std::string& x, const std::string& y) {
  need(x);
  need(y);
  ANode n;
  n.kind = k;
  n.x = x;
  n.y = y;
  return make_anode(std::move(n));
}

ArithFormula bin(AKind k, ArithFormula a, ArithFormula b) {
  ANode n;
  n.kind = k;
  n.a = std::move(a);
  n.b = std::move(b);
  return make_anode(std::move(n));
}

ArithFormula quant(bool exists, int order, const std::string& var, ArithFormula body) {
  need(var);
  if (order < 1 || order > 3) throw ShapeError("quantifier order must be 1, 2, or 3");
  ANode n;
  n.kind = AKind::Quant;
  n.exists = exists;
  n.order = order;
  n.x = var;
  n.a = std::move(body);
  return make_anode(std::move(n));
}

}  // namespace

ArithFormula a_less(const std::string& x, const std::string& y) {
  return atom2(AKind::Less, x, y);
}
ArithFormula a_sum(const std::string& x, const std::string& y, const std::string& z) {
  return atom3(AKind::SumEq, x, y, z);
}
ArithFormula a_prod(const std::string& x, const std::string& y, const std::string& z) {
  return atom3(AKind::ProdEq, x, y, z);
}
ArithFormula a_in(const std::string& x, const std::string& Y) {
  return atom2(AKind::InSet, x, Y);
}
ArithFormula a_in_family(const std::string& Y, const std::string& YY) {
  return atom2(AKind::InFamily, Y, YY);
}
ArithFormula a_not(ArithFormula f) {
  ANode n;
  n.kind = AKind::Not;
  n.a = std::move(f);
  return make_anode(std::move(n));
}
ArithFormula a_or(ArithFormula a, ArithFormula b) {
  return bin(AKind::Or, std::move(a), std::move(b));
}
ArithFormula a_and(ArithFormula a, ArithFormula b) {
  return bin(AKind::And, std::move(a), std::move(b));
}
ArithFormula a_implies(ArithFormula a, ArithFormula b) {
  return bin(AKind::Implies, std::move(a), std::move(b));
}
ArithFormula a_iff(ArithFormula a, ArithFormula b) {
  return bin(AKind::Iff, std::move(a), std::move(b));
}
ArithFormula a_exists(int order, const std::string& var, ArithFormula body) {
  return quant(true, order, var, std::move(body));
}
ArithFormula a_forall(int order, const std::string& var, ArithFormula body) {
  return quant(false, order, var, std::move(body));
}
ArithFormula a_conj(const std::vector<ArithFormula>& fs) {
  if (fs.empty()) throw Error("a_conj of an empty list");
  ArithFormula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = a_and(out, fs[i]);
  return out;
}

namespace {

// Accumulates order constraints; bound = declared orders on the path.
void order_walk(const ANode& n, std::map<std::string, int>& bound,
                std::map<std::string, int>& free) {
  auto use = [&](const std::string& v, int order) {
    auto it = bound.find(v);
    if (it != bound.end()) {
      if (it->second != order) {
        throw ShapeError("variable '" + v + "' used at order " +
                         std::to_string(order) + " but quantified at order " +
                         std::to_string(it->second));
      }
      return;
    }
    auto [fit, inserted] = free.emplace(v, order);
    if (!inserted && fit->second != order) {
      throw ShapeError("free variable '" + v + "' used at inconsistent orders");
    }
  };
  switch (n.kind) {
    case AKind::Less:
      use(n.x, 1);
      use(n.y, 1);
      return;
    case AKind::SumEq:
    case AKind::ProdEq:
      use(n.x, 1);
      use(n.y, 1);
      use(n.z, 1);
      return;
    case AKind::InSet:
      use(n.x, 1);
      use(n.y, 2);
      return;
    case AKind::InFamily:
      use(n.x, 2);
      use(n.y, 3);
      return;
    case AKind::Quant: {
      auto saved = bound.find(n.x) != bound.end() ? std::optional<int>(bound[n.x])
                                                  : std::nullopt;
      bound[n.x] = n.order;
      order_walk(n.a.node(), bound, free);
      if (saved) bound[n.x] = *saved; else bound.erase(n.x);
      return;
    }
    default:
      if (n.a) order_walk(n.a.node(), bound, free);
      if (n.b) order_walk(n.b.node(), bound, free);
      return;
  }
}

}  // namespace

std::map<std::string, int> arith_free_vars(const ArithFormula& f) {
  std::map<std::string, int> bound, free;
  order_walk(f.node(), bound, free);
  return free;
}

void check_var_orders(const ArithFormula& f) {
  std::map<std::string, int> bound, free;
  order_walk(f.node(), bound, free);
}

bool arith_has_third_order(const ArithFormula& f) {
  const ANode& n = f.node();
  if (n.kind == AKind::Quant && n.order == 3) return true;
  if (n.a && arith_has_third_order(n.a)) return true;
  if (n.b && arith_has_third_order(n.b)) return true;
  return false;
}

bool is_sigma21(const ArithFormula& f) {
  const ANode* n = f.raw();
  while (n->kind == AKind::Quant && n->order == 3 && n->exists) {
    n = n->a.raw();
  }
  // after the existential third-order block, no third-order quantifiers remain
  std::function<bool(const ANode&)> clean = [&](const ANode& m) -> bool {
    if (m.kind == AKind::Quant && m.order == 3) return false;
    if (m.a && !clean(m.a.node())) return false;
    if (m.b && !clean(m.b.node())) return false;
    return true;
  };
  return clean(*n);
}

std::size_t arith_node_count(const ArithFormula& f) {
  const ANode& n = f.node();
  std::size_t c = 1;
  if (n.a) c += arith_node_count(n.a);
  if (n.b) c += arith_node_count(n.b);
  return c;
}

namespace {

void collect_arith_names(const ANode& n, std::set<std::string>& out) {
  if (!n.x.empty()) out.insert(n.x);
  if (!n.y.empty()) out.insert(n.y);
  if (!n.z.empty()) out.insert(n.z);
  if (n.a) collect_arith_names(n.a.node(), out);
  if (n.b) collect_arith_names(n.b.node(), out);
}

struct ARenameCtx {
  std::set<std::string> taken;
  std::set<std::string> seen_binders;
  std::string fresh(const std::string& base) {
    for (int k = 1;; ++k) {
      std::string n = base + std::to_string(k);
      if (!taken.count(n)) {
        taken.insert(n);
        return n;
      }
    }
  }
};

ArithFormula arename(const ArithFormula& f, ARenameCtx& ctx,
                     std::map<std::string, std::string>& env) {
  const ANode& n = f.node();
  auto subst = [&](const std::string& v) {
    auto it = env.find(v);
    return it == env.end() ? v : it->second;
  };
  switch (n.kind) {
    case AKind::Less:
      return a_less(subst(n.x), subst(n.y));
    case AKind::SumEq:
      return a_sum(subst(n.x), subst(n.y), subst(n.z));
    case AKind::ProdEq:
      return a_prod(subst(n.x), subst(n.y), subst(n.z));
    case AKind::InSet:
      return a_in(subst(n.x), subst(n.y));
    case AKind::InFamily:
      return a_in_family(subst(n.x), subst(n.y));
    case AKind::Quant: {
      std::string v = n.x;
      std::string v2 = ctx.seen_binders.count(v) ? ctx.fresh(v) : v;
      ctx.seen_binders.insert(v2);
      ctx.taken.insert(v2);
      auto saved = env.find(v) != env.end() ? std::optional<std::string>(env[v])
                                            : std::nullopt;
      env[v] = v2;
      ArithFormula body = arename(n.a, ctx, env);
      if (saved) env[v] = *saved; else env.erase(v);
      return n.exists ? a_exists(n.order, v2, std::move(body))
                      : a_forall(n.order, v2, std::move(body));
    }
    default: {
      ANode out;
      out.kind = n.kind;
      if (n.a) out.a = arename(n.a, ctx, env);
      if (n.b) out.b = arename(n.b, ctx, env);
      return make_anode(std::move(out));
    }
  }
}

}  // namespace

ArithFormula rename_apart_arith(const ArithFormula& f) {
  ARenameCtx ctx;
  collect_arith_names(f.node(), ctx.taken);
  for (const auto& [v, order] : arith_free_vars(f)) {
    (void)order;
    ctx.seen_binders.insert(v);  // free names may not be rebound
  }
  std::map<std::string, std::string> env;
  return arename(f, ctx, env);
}

}  // namespace hyperq
