// SPDX-License-Identifier: Apache-2.0
#include "hyperq/arith.hpp"

#include <cmath>
#include <optional>

namespace hyperq {

std::uint64_t cantor_pair(std::uint64_t i, std::uint64_t j) {
  if (i + j < i || i + j > (std::uint64_t(1) << 31)) {
    throw CapError("cantor_pair arguments too large");
  }
  std::uint64_t s = i + j;
  return s * (s + 1) / 2 + j;
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n) {
  // w = floor((sqrt(8n+1)-1)/2) via integer search from a float seed
  std::uint64_t w = static_cast<std::uint64_t>(
      (std::sqrt(8.0L * static_cast<long double>(n) + 1.0L) - 1.0L) / 2.0L);
  while (w * (w + 1) / 2 > n) --w;
  while ((w + 1) * (w + 2) / 2 <= n) ++w;
  std::uint64_t t = w * (w + 1) / 2;
  std::uint64_t j = n - t;
  std::uint64_t i = w - j;
  return {i, j};
}

EncodedTrace encode_trace(const LassoTrace& t,
                          const std::map<std::string, std::uint64_t>& prop_index,
                          std::uint64_t horizon) {
  std::set<std::uint64_t> seen_indices;
  for (const auto& [p, idx] : prop_index) {
    if (!seen_indices.insert(idx).second) {
      throw Error("prop_index must be injective");
    }
  }
  EncodedTrace out;
  for (std::uint64_t i = 0; i < horizon; ++i) {
    for (const auto& [p, idx] : prop_index) {
      if (t.alphabet().contains(p) && t.has(i, p)) {
        out.values.insert(cantor_pair(i, idx));
      }
    }
  }
  return out;
}

std::vector<std::set<std::string>> decode_trace(
    const EncodedTrace& e, const std::map<std::string, std::uint64_t>& prop_index,
    std::uint64_t horizon) {
  std::vector<std::set<std::string>> out(horizon);
  for (std::uint64_t i = 0; i < horizon; ++i) {
    for (const auto& [p, idx] : prop_index) {
      if (e.values.count(cantor_pair(i, idx))) out[i].insert(p);
    }
  }
  return out;
}

namespace {

struct ArithEnv {
  const BoundedDomain& dom;
  std::map<std::string, std::uint64_t> first;
  std::map<std::string, std::uint64_t> second;
  std::map<std::string, std::uint64_t> third;

  std::uint64_t get(const std::map<std::string, std::uint64_t>& m, const std::string& v,
                    const char* what) const {
    auto it = m.find(v);
    if (it == m.end()) {
      throw EvalError(std::string("unbound ") + what + " variable '" + v + "'");
    }
    return it->second;
  }
};

bool aeval(const ArithFormula& f, ArithEnv& env) {
  const ANode& n = f.node();
  const std::uint64_t N = env.dom.N;
  switch (n.kind) {
    case AKind::Less:
      return env.get(env.first, n.x, "first-order") <
             env.get(env.first, n.y, "first-order");
    case AKind::SumEq:
      return env.get(env.first, n.x, "first-order") +
                 env.get(env.first, n.y, "first-order") ==
             env.get(env.first, n.z, "first-order");
    case AKind::ProdEq:
      return env.get(env.first, n.x, "first-order") *
                 env.get(env.first, n.y, "first-order") ==
             env.get(env.first, n.z, "first-order");
    case AKind::InSet: {
      std::uint64_t v = env.get(env.first, n.x, "first-order");
      std::uint64_t mask = env.get(env.second, n.y, "second-order");
      return (mask >> v) & 1u;
    }
    case AKind::InFamily: {
      std::uint64_t mask = env.get(env.second, n.x, "second-order");
      std::uint64_t family = env.get(env.third, n.y, "third-order");
      if (mask >= 64) throw CapError("third-order membership needs N <= 6");
      return (family >> mask) & 1u;
    }
    case AKind::Not:
      return !aeval(n.a, env);
    case AKind::Or:
      return aeval(n.a, env) || aeval(n.b, env);
    case AKind::And:
      return aeval(n.a, env) && aeval(n.b, env);
    case AKind::Implies:
      return !aeval(n.a, env) || aeval(n.b, env);
    case AKind::Iff:
      return aeval(n.a, env) == aeval(n.b, env);
    case AKind::Quant: {
      auto run = [&](std::map<std::string, std::uint64_t>& m, std::uint64_t count) {
        auto old = m.find(n.x);
        std::optional<std::uint64_t> saved =
            old != m.end() ? std::optional<std::uint64_t>(old->second) : std::nullopt;
        bool result = !n.exists;
        for (std::uint64_t v = 0; v < count; ++v) {
          m[n.x] = v;
          bool r = aeval(n.a, env);
          if (n.exists == r) {
            result = r;
            break;
          }
        }
        if (saved) m[n.x] = *saved; else m.erase(n.x);
        return result;
      };
      if (n.order == 1) return run(env.first, N);
      if (n.order == 2) return run(env.second, std::uint64_t(1) << N);
      std::uint64_t sets = std::uint64_t(1) << N;
      if (sets > 16 && !env.dom.allow_large_third_order) {
        throw CapError("third-order enumeration needs N <= 4 (override to force)");
      }
      if (sets >= 64) throw CapError("third-order enumeration overflows at N >= 6");
      return run(env.third, std::uint64_t(1) << sets);
    }
  }
  throw Error("unreachable");
}

}  // namespace

bool eval_arith(const ArithFormula& f, const BoundedDomain& d, const ArithAssignment& a) {
  check_var_orders(f);
  ArithEnv env{d, a.first, a.second, a.third};
  return aeval(f, env);
}

namespace {

/// y < x and nothing strictly between: x = y + 1, definable from < alone.
ArithFormula successor(const std::string& y, const std::string& x,
                       const std::string& mid) {
  return a_and(a_less(y, x), a_not(a_exists(1, mid, a_and(a_less(y, mid),
                                                          a_less(mid, x)))));
}

ArithFormula theta_eq(std::uint64_t n, const std::string& var, int& counter) {
  if (n == 0) return a_sum(var, var, var);  // x + x = x forces x = 0
  std::string fresh = "tq" + std::to_string(counter++);
  if (n % 2 == 0) {
    return a_exists(1, fresh,
                    a_and(a_sum(fresh, fresh, var), theta_eq(n / 2, fresh, counter)));
  }
  std::string mid = "tq" + std::to_string(counter++);
  return a_exists(1, fresh,
                  a_and(theta_eq(n - 1, fresh, counter), successor(fresh, var, mid)));
}

}  // namespace

ArithFormula build_theta_eq_n(std::uint64_t n, const std::string& free_var) {
  int counter = 0;
  return theta_eq(n, free_var, counter);
}

}  // namespace hyperq
