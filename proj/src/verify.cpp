// SPDX-License-Identifier: Apache-2.0
#include "hyperq/verify.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "hyperq/arith.hpp"
#include "hyperq/eval.hpp"
#include "hyperq/io.hpp"
#include "hyperq/reductions.hpp"
#include "hyperq/skolem.hpp"

namespace hyperq::verify {

std::string format_result(const SuiteResult& r) {
  std::ostringstream out;
  out << r.suite << ": " << r.cases << " cases, " << (r.cases - r.failures)
      << " passed, " << r.failures << " failed";
  for (const auto& n : r.notes) out << "\n  " << n;
  return out.str();
}

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <typename T>
const T& choose(std::mt19937_64& rng, const std::vector<T>& pool) {
  return pool[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(pool.size()) - 1))];
}

}  // namespace

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

Formula random_formula(Logic logic, std::mt19937_64& rng, int max_depth) {
  static const std::vector<std::string> props = {"p", "q", "r"};
  static const std::vector<std::string> tvars = {"pi", "pi1", "pi2"};
  static const std::vector<std::string> setvars = {"X0", "Y"};

  std::function<Formula(int)> gen = [&](int depth) -> Formula {
    if (depth <= 0 || pick(rng, 0, 5) == 0) {
      if (logic == Logic::HyperQPTL && pick(rng, 0, 3) == 0) {
        if (pick(rng, 0, 9) == 0) return axiom_plus_times();
        return prop_atom(choose(rng, props));
      }
      return labeled_atom(logic, choose(rng, props), choose(rng, tvars));
    }
    switch (pick(rng, 0, 13)) {
      case 0: return lnot(gen(depth - 1));
      case 1: return lor(gen(depth - 1), gen(depth - 1));
      case 2: return land(gen(depth - 1), gen(depth - 1));
      case 3: return implies(gen(depth - 1), gen(depth - 1));
      case 4: return iff(gen(depth - 1), gen(depth - 1));
      case 5: return next(gen(depth - 1));
      case 6: return eventually(gen(depth - 1));
      case 7: return always(gen(depth - 1));
      case 8: return until(gen(depth - 1), gen(depth - 1));
      case 9:
      case 10: {
        bool ex = pick(rng, 0, 1) == 0;
        const std::string& v = choose(rng, tvars);
        Formula body = gen(depth - 1);
        if (logic == Logic::Hyper2LTL) {
          std::vector<SetVar> domains = {SetVar("X0"), SetVar("Y"), SetVar::all(),
                                         SetVar::discourse()};
          const SetVar& d = domains[static_cast<std::size_t>(pick(rng, 0, 3))];
          return ex ? exists_trace_in(v, d, body) : forall_trace_in(v, d, body);
        }
        return ex ? exists_trace(v, body) : forall_trace(v, body);
      }
      case 11:
      case 12: {
        bool ex = pick(rng, 0, 1) == 0;
        Formula body = gen(depth - 1);
        if (logic == Logic::Hyper2LTL) {
          SetVar x(choose(rng, setvars));
          return ex ? exists_set(x, body) : forall_set(x, body);
        }
        return ex ? exists_prop(choose(rng, props), body)
                  : forall_prop(choose(rng, props), body);
      }
      default:
        return gen(depth - 1);
    }
  };
  return gen(max_depth);
}

ArithFormula random_arith_formula(std::mt19937_64& rng, int max_depth) {
  static const std::vector<std::string> v1 = {"y", "y'", "z"};
  static const std::vector<std::string> v2 = {"Y", "Z"};
  static const std::vector<std::string> v3 = {"YY", "ZZ"};

  std::function<ArithFormula(int)> gen = [&](int depth) -> ArithFormula {
    if (depth <= 0 || pick(rng, 0, 4) == 0) {
      switch (pick(rng, 0, 4)) {
        case 0: return a_less(choose(rng, v1), choose(rng, v1));
        case 1: return a_sum(choose(rng, v1), choose(rng, v1), choose(rng, v1));
        case 2: return a_prod(choose(rng, v1), choose(rng, v1), choose(rng, v1));
        case 3: return a_in(choose(rng, v1), choose(rng, v2));
        default: return a_in_family(choose(rng, v2), choose(rng, v3));
      }
    }
    switch (pick(rng, 0, 7)) {
      case 0: return a_not(gen(depth - 1));
      case 1: return a_or(gen(depth - 1), gen(depth - 1));
      case 2: return a_and(gen(depth - 1), gen(depth - 1));
      case 3: return a_implies(gen(depth - 1), gen(depth - 1));
      case 4: return a_iff(gen(depth - 1), gen(depth - 1));
      default: {
        int order = pick(rng, 1, 3);
        const std::string& var = order == 1   ? choose(rng, v1)
                                 : order == 2 ? choose(rng, v2)
                                              : choose(rng, v3);
        bool ex = pick(rng, 0, 1) == 0;
        ArithFormula body = gen(depth - 1);
        return ex ? a_exists(order, var, body) : a_forall(order, var, body);
      }
    }
  };
  ArithFormula f = gen(max_depth);
  // close the formula: free membership atoms cannot carry their orders in
  // the surface syntax, so round-trip fuzzing works on sentences
  for (const auto& [v, order] : arith_free_vars(f)) {
    f = a_exists(order, v, f);
  }
  return f;
}

Formula random_qf_matrix(Logic logic, std::mt19937_64& rng, int max_depth,
                         const std::vector<std::string>& trace_vars,
                         const std::vector<std::string>& row_props) {
  static const std::vector<std::string> props = {"p", "q"};
  std::function<Formula(int)> gen = [&](int depth) -> Formula {
    if (depth <= 0 || pick(rng, 0, 4) == 0) {
      if (logic == Logic::HyperQPTL && !row_props.empty() && pick(rng, 0, 2) == 0) {
        return prop_atom(choose(rng, row_props));
      }
      return labeled_atom(logic, choose(rng, props), choose(rng, trace_vars));
    }
    switch (pick(rng, 0, 7)) {
      case 0: return lnot(gen(depth - 1));
      case 1: return lor(gen(depth - 1), gen(depth - 1));
      case 2: return land(gen(depth - 1), gen(depth - 1));
      case 3: return next(gen(depth - 1));
      case 4: return eventually(gen(depth - 1));
      case 5: return always(gen(depth - 1));
      case 6: return until(gen(depth - 1), gen(depth - 1));
      default: return implies(gen(depth - 1), gen(depth - 1));
    }
  };
  return gen(max_depth);
}

// ---------------------------------------------------------------------------
// round trip
// ---------------------------------------------------------------------------

std::vector<std::string> corpus_files(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".hq") {
      out.push_back(entry.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SuiteResult roundtrip_suite(std::uint64_t seed, int cases_per_logic,
                            const std::string& corpus_dir) {
  SuiteResult r;
  r.suite = "roundtrip";
  std::mt19937_64 rng(seed);
  for (Logic logic :
       {Logic::HyperQPTL, Logic::HyperQPTLPlus, Logic::Hyper2LTL}) {
    for (int i = 0; i < cases_per_logic; ++i) {
      Formula f = random_formula(logic, rng, 8);
      ++r.cases;
      std::string text = print_formula(f);
      try {
        Formula g = parse_formula(text, logic);
        if (!(g == f)) {
          ++r.failures;
          if (r.notes.size() < 5) r.notes.push_back("reparse mismatch: " + text);
        }
      } catch (const std::exception& e) {
        ++r.failures;
        if (r.notes.size() < 5) {
          r.notes.push_back("reparse error: " + std::string(e.what()) + " on " + text);
        }
      }
    }
  }
  for (int i = 0; i < cases_per_logic; ++i) {
    ArithFormula f = random_arith_formula(rng, 8);
    ++r.cases;
    std::string text = print_arith(f);
    try {
      ArithFormula g = parse_arith(text);
      if (!(g == f)) {
        ++r.failures;
        if (r.notes.size() < 5) r.notes.push_back("arith reparse mismatch: " + text);
      }
    } catch (const std::exception& e) {
      ++r.failures;
      if (r.notes.size() < 5) {
        r.notes.push_back("arith reparse error: " + std::string(e.what()) + " on " +
                          text);
      }
    }
  }
  for (const auto& path : corpus_files(corpus_dir)) {
    ++r.cases;
    try {
      ParsedFile pf = parse_file(path);
      std::string text = print_any(pf.formula);
      ParsedFile again = parse_file_text("#logic: " + to_string(pf.logic) + "\n" + text);
      bool same = std::visit(
          [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            return std::holds_alternative<T>(again.formula) &&
                   std::get<T>(again.formula) == a;
          },
          pf.formula);
      if (!same) {
        ++r.failures;
        r.notes.push_back("corpus round-trip mismatch: " + path);
      }
    } catch (const std::exception& e) {
      ++r.failures;
      r.notes.push_back("corpus error in " + path + ": " + e.what());
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// lasso exactness: eval_qf vs explicit unrolling
// ---------------------------------------------------------------------------

namespace {

/// Independent oracle: literal scanning of unrolled positions within a
/// double-period window, no wrapped-position arithmetic.
bool unroll_oracle(const Formula& f, const Assignment& a, std::size_t i,
                   std::size_t S, std::size_t L) {
  const Node& n = f.node();
  std::size_t window_end = std::max(i, S) + 2 * L;
  switch (n.kind) {
    case Kind::LabeledAtom:
      return a.traces.at(n.tvar).has(i, n.prop);
    case Kind::PropAtom:
      return a.prop_rows.at(n.prop).has(i, n.prop);
    case Kind::Not:
      return !unroll_oracle(n.a, a, i, S, L);
    case Kind::Or:
      return unroll_oracle(n.a, a, i, S, L) || unroll_oracle(n.b, a, i, S, L);
    case Kind::And:
      return unroll_oracle(n.a, a, i, S, L) && unroll_oracle(n.b, a, i, S, L);
    case Kind::Implies:
      return !unroll_oracle(n.a, a, i, S, L) || unroll_oracle(n.b, a, i, S, L);
    case Kind::Iff:
      return unroll_oracle(n.a, a, i, S, L) == unroll_oracle(n.b, a, i, S, L);
    case Kind::Next:
      return unroll_oracle(n.a, a, i + 1, S, L);
    case Kind::Eventually:
      for (std::size_t j = i; j < window_end; ++j) {
        if (unroll_oracle(n.a, a, j, S, L)) return true;
      }
      return false;
    case Kind::Always:
      for (std::size_t j = i; j < window_end; ++j) {
        if (!unroll_oracle(n.a, a, j, S, L)) return false;
      }
      return true;
    case Kind::Until:
      for (std::size_t j = i; j < window_end; ++j) {
        if (unroll_oracle(n.b, a, j, S, L)) {
          bool all = true;
          for (std::size_t k = i; k < j && all; ++k) {
            all = unroll_oracle(n.a, a, k, S, L);
          }
          if (all) return true;
        } else if (!unroll_oracle(n.a, a, j, S, L)) {
          return false;
        }
      }
      return false;
    default:
      throw Error("oracle: unexpected node");
  }
}

LassoTrace random_lasso(const Alphabet& ap, std::mt19937_64& rng, std::size_t max_stem,
                        std::size_t max_loop) {
  std::vector<Letter> s, l;
  std::size_t sn = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(max_stem)));
  std::size_t ln = static_cast<std::size_t>(pick(rng, 1, static_cast<int>(max_loop)));
  std::uniform_int_distribution<Letter> letter(0, (Letter(1) << ap.size()) - 1);
  for (std::size_t i = 0; i < sn; ++i) s.push_back(letter(rng));
  for (std::size_t i = 0; i < ln; ++i) l.push_back(letter(rng));
  return LassoTrace(ap, std::move(s), std::move(l));
}

}  // namespace

SuiteResult lasso_exactness_suite(std::uint64_t seed, int cases) {
  SuiteResult r;
  r.suite = "lasso-exactness";
  std::mt19937_64 rng(seed);
  Alphabet ap({"p", "q"});
  Alphabet uap({"u"});
  for (int round = 0; round < cases; ++round) {
    Assignment a;
    a.traces.emplace("pi1", random_lasso(ap, rng, 3, 3));
    a.traces.emplace("pi2", random_lasso(ap, rng, 3, 3));
    a.prop_rows.emplace("u", random_lasso(uap, rng, 3, 3));
    std::size_t S = 0, L = 1;
    for (const auto& [k, t] : a.traces) {
      S = std::max(S, t.stem_size());
      L = std::lcm(L, t.loop_size());
    }
    for (const auto& [k, t] : a.prop_rows) {
      S = std::max(S, t.stem_size());
      L = std::lcm(L, t.loop_size());
    }
    Formula f = random_qf_matrix(Logic::HyperQPTL, rng, 4, {"pi1", "pi2"}, {"u"});
    ++r.cases;
    bool ok = true;
    for (std::size_t i = 0; i <= S + L && ok; ++i) {
      ok = eval_qf(a, i, f) == unroll_oracle(f, a, i, S, L);
    }
    if (!ok) {
      ++r.failures;
      if (r.notes.size() < 5) {
        r.notes.push_back("exactness mismatch on " + print_formula(f));
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// pairing and trace encoding
// ---------------------------------------------------------------------------

SuiteResult pairing_suite() {
  SuiteResult r;
  r.suite = "pairing";
  for (std::uint64_t i = 0; i < 64; ++i) {
    for (std::uint64_t j = 0; j < 64; ++j) {
      ++r.cases;
      auto [a, b] = cantor_unpair(cantor_pair(i, j));
      if (a != i || b != j) {
        ++r.failures;
        r.notes.push_back("pair round trip failed at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      }
    }
  }
  for (std::uint64_t n = 0; n < 4096; ++n) {
    ++r.cases;
    auto [i, j] = cantor_unpair(n);
    if (cantor_pair(i, j) != n) {
      ++r.failures;
      r.notes.push_back("unpair round trip failed at " + std::to_string(n));
    }
  }
  std::mt19937_64 rng(2024);
  Alphabet ap({"p", "q", "r"});
  std::map<std::string, std::uint64_t> index = {{"p", 0}, {"q", 1}, {"r", 2}};
  for (int round = 0; round < 500; ++round) {
    LassoTrace t = random_lasso(ap, rng, 4, 4);
    std::uint64_t horizon = t.stem_size() + 2 * t.loop_size();
    ++r.cases;
    auto decoded = decode_trace(encode_trace(t, index, horizon), index, horizon);
    bool ok = decoded.size() == horizon;
    for (std::uint64_t i = 0; ok && i < horizon; ++i) {
      for (const auto& [p, idx] : index) {
        if (t.has(i, p) != (decoded[i].count(p) > 0)) ok = false;
      }
    }
    if (!ok) {
      ++r.failures;
      r.notes.push_back("encode/decode mismatch on " + t.to_string());
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// expansions
// ---------------------------------------------------------------------------

namespace {

Formula random_core_qf(std::mt19937_64& rng, int max_depth,
                       const std::vector<std::string>& tvars,
                       const std::vector<std::string>& rows) {
  static const std::vector<std::string> props = {"p", "q"};
  std::function<Formula(int)> gen = [&](int depth) -> Formula {
    if (depth <= 0 || pick(rng, 0, 3) == 0) {
      if (!rows.empty() && pick(rng, 0, 2) == 0) return prop_atom(choose(rng, rows));
      return labeled_atom(Logic::HyperQPTL, choose(rng, props), choose(rng, tvars));
    }
    switch (pick(rng, 0, 3)) {
      case 0: return lnot(gen(depth - 1));
      case 1: return lor(gen(depth - 1), gen(depth - 1));
      case 2: return next(gen(depth - 1));
      default: return eventually(gen(depth - 1));
    }
  };
  return gen(max_depth);
}

}  // namespace

SuiteResult expansion_suite(std::uint64_t seed, int cases) {
  SuiteResult r;
  r.suite = "expansion";
  std::mt19937_64 rng(seed);
  Alphabet ap({"p", "q"});
  Alphabet uap({"u"});

  for (int round = 0; round < cases; ++round) {
    Assignment a;
    a.traces.emplace("pi1", random_lasso(ap, rng, 2, 2));
    a.traces.emplace("pi2", random_lasso(ap, rng, 2, 2));
    a.prop_rows.emplace("u", random_lasso(uap, rng, 2, 2));
    Formula f = random_core_qf(rng, 4, {"pi1", "pi2"}, {"u"});
    ++r.cases;
    ExpansionTable table = build_expansion(f, a);
    bool ok = check_consistency(table, a);
    for (std::size_t s = 0; ok && s < table.subformulas().size(); ++s) {
      for (std::size_t i = 0; ok && i < table.width(); ++i) {
        ok = table.bit(s, i) == eval_qf(a, i, table.subformulas()[s]);
      }
    }
    if (!ok) {
      ++r.failures;
      if (r.notes.size() < 5) {
        r.notes.push_back("expansion mismatch on " + print_formula(f));
      }
    }
  }

  // exhaustive uniqueness on tiny instances: |subformulas| <= 4, width <= 4
  std::mt19937_64 rng2(seed ^ 0x9e3779b9ULL);
  int tiny_done = 0;
  while (tiny_done < 40) {
    Assignment a;
    a.traces.emplace("pi1", random_lasso(ap, rng2, 1, 2));
    a.prop_rows.emplace("u", random_lasso(uap, rng2, 1, 2));
    Formula f = random_core_qf(rng2, 2, {"pi1"}, {"u"});
    ExpansionTable built = build_expansion(f, a);
    std::size_t bits = built.subformulas().size() * built.width();
    if (built.subformulas().size() > 4 || built.width() > 4) continue;
    ++tiny_done;
    ++r.cases;
    std::size_t consistent = 0;
    bool built_among = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << bits); ++mask) {
      std::vector<std::vector<bool>> candidate(
          built.subformulas().size(), std::vector<bool>(built.width(), false));
      std::size_t bit = 0;
      for (auto& row : candidate) {
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = (mask >> bit++) & 1u;
      }
      ExpansionTable ct = built.with_bits(std::move(candidate));
      if (check_consistency(ct, a)) {
        ++consistent;
        if (ct.bits() == built.bits()) built_among = true;
      }
    }
    if (consistent != 1 || !built_among) {
      ++r.failures;
      r.notes.push_back("uniqueness failed (" + std::to_string(consistent) +
                        " consistent tables) on " + print_formula(f));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Skolem grid
// ---------------------------------------------------------------------------

SuiteResult skolem_grid_suite() {
  SuiteResult r;
  r.suite = "skolem-grid";
  Alphabet ap({"p", "q"});
  UniverseParams params(0, 1);
  EvalParams ep(params, ap);
  TraceSet universe = enumerate_universe(ap, params);
  const auto& u = universe.members();  // 4 constant traces

  std::vector<TraceSet> models;
  for (std::uint32_t mask = 1; mask < 16; ++mask) {
    if (__builtin_popcount(mask) > 3) continue;
    std::vector<LassoTrace> members;
    for (std::size_t i = 0; i < 4; ++i) {
      if ((mask >> i) & 1u) members.push_back(u[i]);
    }
    models.emplace_back(ap, std::move(members));
  }

  auto matrices = [&](const std::vector<std::string>& tvars, bool has_prop) {
    std::vector<Formula> out;
    auto p_at = [&](const std::string& v) {
      return labeled_atom(Logic::HyperQPTL, "p", v);
    };
    if (!tvars.empty()) {
      out.push_back(p_at(tvars[0]));
      out.push_back(lnot(p_at(tvars[0])));
      out.push_back(eventually(p_at(tvars[0])));
      out.push_back(next(p_at(tvars[0])));
    }
    if (tvars.size() >= 2) {
      out.push_back(lor(p_at(tvars[0]), lnot(p_at(tvars[1]))));
      out.push_back(lnot(lor(lnot(p_at(tvars[0])), lnot(p_at(tvars[1])))));
    }
    if (has_prop) {
      out.push_back(prop_atom("q"));
      out.push_back(lnot(prop_atom("q")));
      if (!tvars.empty()) {
        out.push_back(lor(lnot(prop_atom("q")), p_at(tvars[0])));
        out.push_back(lor(prop_atom("q"), p_at(tvars[0])));
      }
    }
    if (out.empty()) out.push_back(lor(prop_atom("q"), lnot(prop_atom("q"))));
    return out;
  };

  struct K {
    bool prop;
    bool exists;
  };
  std::vector<std::vector<K>> prefixes;
  std::vector<K> kinds = {{false, true}, {false, false}, {true, true}, {true, false}};
  for (std::size_t len = 1; len <= 3; ++len) {
    std::vector<std::size_t> idx(len, 0);
    while (true) {
      std::vector<K> pfx;
      int props_used = 0;
      for (std::size_t i = 0; i < len; ++i) {
        pfx.push_back(kinds[idx[i]]);
        if (kinds[idx[i]].prop) ++props_used;
      }
      if (props_used <= 1) prefixes.push_back(pfx);
      std::size_t k = len;
      while (k > 0) {
        if (++idx[k - 1] < kinds.size()) break;
        idx[k - 1] = 0;
        --k;
      }
      if (k == 0) break;
    }
  }

  for (const auto& model : models) {
    for (const auto& pfx : prefixes) {
      std::vector<std::string> tvars;
      bool has_prop = false;
      int ti = 0;
      for (const auto& k : pfx) {
        if (k.prop) {
          has_prop = true;
        } else {
          tvars.push_back("pi" + std::to_string(++ti));
        }
      }
      for (const auto& matrix : matrices(tvars, has_prop)) {
        Formula f = matrix;
        int t_left = ti;
        for (auto it = pfx.rbegin(); it != pfx.rend(); ++it) {
          if (it->prop) {
            f = it->exists ? exists_prop("q", f) : forall_prop("q", f);
          } else {
            std::string v = "pi" + std::to_string(t_left--);
            f = it->exists ? exists_trace(v, f) : forall_trace(v, f);
          }
        }
        ++r.cases;
        try {
          bool direct = eval_hyperqptl(model, f, ep);
          bool skolem = search_skolem(model, f, ep).has_value();
          if (direct != skolem) {
            ++r.failures;
            if (r.notes.size() < 8) {
              r.notes.push_back("grid mismatch on " + print_formula(f) +
                                " (direct=" + std::to_string(direct) + ")");
            }
          }
        } catch (const std::exception& e) {
          ++r.failures;
          if (r.notes.size() < 8) {
            r.notes.push_back("grid error on " + print_formula(f) + ": " + e.what());
          }
        }
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lemma 1 correspondence
// ---------------------------------------------------------------------------

namespace {

/// First/second-order formulas in the hyp-supported fragment.
ArithFormula random_hyp_fragment(std::mt19937_64& rng) {
  static const std::vector<std::string> v1 = {"y1", "y2"};
  static const std::vector<std::string> v2 = {"Y1", "Y2"};
  std::function<ArithFormula(int, int)> gen = [&](int depth,
                                                  int quants) -> ArithFormula {
    if (depth <= 0 || pick(rng, 0, 3) == 0) {
      switch (pick(rng, 0, 3)) {
        case 0: return a_less(choose(rng, v1), choose(rng, v1));
        case 1: return a_sum(choose(rng, v1), choose(rng, v1), choose(rng, v1));
        case 2: return a_prod(choose(rng, v1), choose(rng, v1), choose(rng, v1));
        default: return a_in(choose(rng, v1), choose(rng, v2));
      }
    }
    int top = quants > 0 ? 6 : 4;
    switch (pick(rng, 0, top)) {
      case 0: return a_not(gen(depth - 1, quants));
      case 1: return a_or(gen(depth - 1, quants), gen(depth - 1, quants));
      case 2: return a_and(gen(depth - 1, quants), gen(depth - 1, quants));
      case 3:
      case 4: return a_implies(gen(depth - 1, quants), gen(depth - 1, quants));
      default: {
        int order = pick(rng, 1, 2);
        const std::string& var = order == 1 ? choose(rng, v1) : choose(rng, v2);
        bool ex = pick(rng, 0, 1) == 0;
        return ex ? a_exists(order, var, gen(depth - 1, quants - 1))
                  : a_forall(order, var, gen(depth - 1, quants - 1));
      }
    }
  };
  return gen(3, 2);
}

}  // namespace

SuiteResult lemma1_suite(std::uint64_t seed, int cases) {
  SuiteResult r;
  r.suite = "lemma1";
  std::mt19937_64 rng(seed);
  const std::uint64_t N = 8;

  Alphabet ap({"x", "arg1", "arg2", "res", "add", "mult"});
  std::size_t x_bit = *ap.index_of("x");
  std::size_t a1_bit = *ap.index_of("arg1");
  std::size_t a2_bit = *ap.index_of("arg2");
  std::size_t r_bit = *ap.index_of("res");
  std::size_t add_bit = *ap.index_of("add");
  std::size_t mult_bit = *ap.index_of("mult");

  // trace encoding a subset of 0..N-1 as its x positions
  auto set_row = [&](std::uint64_t mask) {
    std::vector<Letter> stem;
    for (std::uint64_t i = 0; i < N; ++i) {
      stem.push_back(((mask >> i) & 1u) ? (Letter(1) << x_bit) : 0);
    }
    return LassoTrace(ap, std::move(stem), {0});
  };
  // witness trace for n1 (+|*) n2 = n3
  auto op_row = [&](std::uint64_t n1, std::uint64_t n2, std::uint64_t n3, bool add) {
    Letter base = Letter(1) << (add ? add_bit : mult_bit);
    std::size_t len = static_cast<std::size_t>(std::max({n1, n2, n3})) + 1;
    std::vector<Letter> stem(len, base);
    stem[n1] |= Letter(1) << a1_bit;
    stem[n2] |= Letter(1) << a2_bit;
    stem[n3] |= Letter(1) << r_bit;
    return LassoTrace(ap, std::move(stem), {base});
  };

  std::vector<LassoTrace> members;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << N); ++mask) {
    members.push_back(set_row(mask));
  }
  for (std::uint64_t a = 0; a < N; ++a) {
    for (std::uint64_t b = 0; b < N; ++b) {
      if (a + b < N) members.push_back(op_row(a, b, a + b, true));
      if (a * b < N) members.push_back(op_row(a, b, a * b, false));
    }
  }
  TraceSet t_alpha(ap, std::move(members));
  EvalParams ep(UniverseParams(N, 1), ap);
  ep.iteration_cap = std::size_t(1) << 28;
  BoundedDomain dom(N);

  for (int round = 0; round < cases; ++round) {
    ArithFormula psi = random_hyp_fragment(rng);
    ArithAssignment alpha;
    Assignment pi_alpha;
    for (const auto& [v, order] : arith_free_vars(psi)) {
      if (order == 1) {
        std::uint64_t val = static_cast<std::uint64_t>(pick(rng, 0, int(N) - 1));
        alpha.first[v] = val;
        pi_alpha.traces.emplace("pi_" + v, set_row(std::uint64_t(1) << val));
      } else {
        std::uint64_t mask = static_cast<std::uint64_t>(pick(rng, 0, (1 << N) - 1));
        alpha.second[v] = mask;
        pi_alpha.traces.emplace("pi_" + v, set_row(mask));
      }
    }
    ++r.cases;
    try {
      bool arith = eval_arith(psi, dom, alpha);
      bool temporal = eval_at(t_alpha, hyp(psi, {}), ep, pi_alpha, 0);
      if (arith != temporal) {
        ++r.failures;
        if (r.notes.size() < 5) {
          r.notes.push_back("correspondence mismatch on " + print_arith(psi) +
                            " (arith=" + std::to_string(arith) + ")");
        }
      }
    } catch (const std::exception& e) {
      ++r.failures;
      if (r.notes.size() < 5) {
        r.notes.push_back("correspondence error on " + print_arith(psi) + ": " +
                          e.what());
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lemma 3 / Lemma 4 oracle equivalence over the curated corpus
// ---------------------------------------------------------------------------

namespace {

struct CorpusCase {
  std::string path;
  Formula sentence;
  std::vector<std::string> model_names;
};

std::vector<std::string> models_header(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] != '#') continue;
    std::size_t key = line.find("models:");
    if (key == std::string::npos) continue;
    std::istringstream names(line.substr(key + 7));
    std::string n;
    while (names >> n) out.push_back(n);
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<CorpusCase> load_cases(const std::string& dir, FileLogic logic) {
  std::vector<CorpusCase> out;
  for (const auto& path : corpus_files(dir)) {
    std::string text = slurp(path);
    ParsedFile pf = parse_file_text(text);
    if (pf.logic != logic) continue;
    CorpusCase c;
    c.path = path;
    c.sentence = std::get<Formula>(pf.formula);
    c.model_names = models_header(text);
    out.push_back(std::move(c));
  }
  return out;
}

TraceSet load_named_model(const std::string& corpus_dir, const std::string& name) {
  return load_trace_set(corpus_dir + "/traces/" + name + ".json");
}

}  // namespace

SuiteResult lemma3_suite(const std::string& corpus_dir) {
  SuiteResult r;
  r.suite = "lemma3";
  UniverseParams bounds(1, 1);
  for (const auto& c : load_cases(corpus_dir + "/h2l", FileLogic::Hyper2LTL)) {
    Formula translated;
    try {
      translated = h2l_to_hqptlplus(c.sentence);
    } catch (const std::exception& e) {
      ++r.cases;
      ++r.failures;
      r.notes.push_back("translation failed on " + c.path + ": " + e.what());
      continue;
    }
    for (const auto& model_name : c.model_names) {
      ++r.cases;
      try {
        TraceSet model = load_named_model(corpus_dir, model_name);
        EvalParams src_params(bounds, model.alphabet());
        bool lhs = eval_hyper2ltl(model, c.sentence, src_params);

        std::vector<std::string> ext_names = model.alphabet().names();
        for (const auto& p : props_in_order(translated)) ext_names.push_back(p);
        Alphabet ext(ext_names);
        TraceSet ext_model = extend_alphabet(model, ext);
        EvalParams dst_params(bounds, ext);
        dst_params.iteration_cap = std::size_t(1) << 26;
        bool rhs = eval_hyperqptl_plus(ext_model, translated, dst_params);
        if (lhs != rhs) {
          ++r.failures;
          r.notes.push_back("divergence on " + c.path + " model " + model_name +
                            ": h2l=" + std::to_string(lhs) +
                            " hqptl+=" + std::to_string(rhs));
        }
      } catch (const std::exception& e) {
        ++r.failures;
        r.notes.push_back("error on " + c.path + " model " + model_name + ": " +
                          e.what());
      }
    }
  }
  if (r.cases == 0) {
    r.failures = 1;
    r.notes.push_back("no Hyper2LTL corpus cases found under " + corpus_dir);
  }
  return r;
}

SuiteResult lemma4_suite(const std::string& corpus_dir) {
  SuiteResult r;
  r.suite = "lemma4";
  UniverseParams bounds(1, 1);
  for (const auto& c :
       load_cases(corpus_dir + "/hqptlplus", FileLogic::HyperQPTLPlus)) {
    Formula translated;
    try {
      translated = hqptlplus_to_h2l(c.sentence);
    } catch (const std::exception& e) {
      ++r.cases;
      ++r.failures;
      r.notes.push_back("translation failed on " + c.path + ": " + e.what());
      continue;
    }
    for (const auto& model_name : c.model_names) {
      ++r.cases;
      try {
        TraceSet loaded = load_named_model(corpus_dir, model_name);
        // both sides run over the union alphabet of model and sentence
        std::vector<std::string> names = loaded.alphabet().names();
        for (const auto& p : props_in_order(c.sentence)) names.push_back(p);
        Alphabet ext(names);
        TraceSet model = extend_alphabet(loaded, ext);
        EvalParams params(bounds, ext);
        params.iteration_cap = std::size_t(1) << 26;
        bool lhs = eval_hyperqptl_plus(model, c.sentence, params);
        bool rhs = eval_hyper2ltl(model, translated, params);
        if (lhs != rhs) {
          ++r.failures;
          r.notes.push_back("divergence on " + c.path + " model " + model_name +
                            ": hqptl+=" + std::to_string(lhs) +
                            " h2l=" + std::to_string(rhs));
        }
      } catch (const std::exception& e) {
        ++r.failures;
        r.notes.push_back("error on " + c.path + " model " + model_name + ": " +
                          e.what());
      }
    }
  }
  if (r.cases == 0) {
    r.failures = 1;
    r.notes.push_back("no HyperQPTL+ corpus cases found under " + corpus_dir);
  }
  return r;
}

// ---------------------------------------------------------------------------
// structural fidelity
// ---------------------------------------------------------------------------

namespace {
constexpr Logic Q = Logic::HyperQPTL;
constexpr Logic QP = Logic::HyperQPTLPlus;
constexpr Logic H2 = Logic::Hyper2LTL;

Formula x_at(const std::string& v) { return labeled_atom(Q, "x", v); }

Formula x_guard(const std::string& v) {
  return until(lnot(x_at(v)), land(x_at(v), next(always(lnot(x_at(v))))));
}
}  // namespace

SuiteResult structural_fidelity_suite() {
  SuiteResult r;
  r.suite = "structural-fidelity";
  auto expect = [&](const std::string& name, const Formula& got, const Formula& want) {
    ++r.cases;
    if (!(got == want)) {
      ++r.failures;
      r.notes.push_back(name + ": got " + print_formula(got) + ", want " +
                        print_formula(want));
    }
  };

  expect("theta_all", build_theta_all(),
         forall_prop("q", exists_trace("pi", always(iff(prop_atom("q"), x_at("pi"))))));

  expect("theta_cons", build_theta_cons(1),
         forall_trace(
             "pi",
             land(next(always(lnot(labeled_atom(Q, "m1", "pi")))),
                  forall_trace("pi'", implies(always(iff(x_at("pi"), x_at("pi'"))),
                                              iff(labeled_atom(Q, "m1", "pi"),
                                                  labeled_atom(Q, "m1", "pi'")))))));

  std::map<std::string, std::size_t> markers = {{"YY", 1}};
  expect("hyp exists2", hyp(a_exists(2, "Y", a_in("y", "Y")), markers),
         exists_trace("pi_Y", eventually(land(x_at("pi_y"), x_at("pi_Y")))));
  expect("hyp forall2", hyp(a_forall(2, "Y", a_in("y", "Y")), markers),
         forall_trace("pi_Y", eventually(land(x_at("pi_y"), x_at("pi_Y")))));
  expect("hyp exists1", hyp(a_exists(1, "y", a_less("y", "z")), markers),
         exists_trace("pi_y",
                      land(x_guard("pi_y"),
                           eventually(land(x_at("pi_y"),
                                           next(eventually(x_at("pi_z"))))))));
  expect("hyp forall1", hyp(a_forall(1, "y", a_less("y", "z")), markers),
         forall_trace("pi_y",
                      implies(x_guard("pi_y"),
                              eventually(land(x_at("pi_y"),
                                              next(eventually(x_at("pi_z"))))))));
  expect("hyp or", hyp(a_or(a_less("y", "z"), a_less("z", "y")), markers),
         lor(eventually(land(x_at("pi_y"), next(eventually(x_at("pi_z"))))),
             eventually(land(x_at("pi_z"), next(eventually(x_at("pi_y")))))));
  expect("hyp not", hyp(a_not(a_less("y", "z")), markers),
         lnot(eventually(land(x_at("pi_y"), next(eventually(x_at("pi_z")))))));
  expect("hyp in-family", hyp(a_in_family("Y", "YY"), markers),
         labeled_atom(Q, "m1", "pi_Y"));
  expect("hyp in-set", hyp(a_in("y", "Y"), markers),
         eventually(land(x_at("pi_y"), x_at("pi_Y"))));
  expect("hyp less", hyp(a_less("y", "y'"), markers),
         eventually(land(x_at("pi_y"), next(eventually(x_at("pi_y'"))))));
  expect("hyp sum", hyp(a_sum("y1", "y2", "y"), markers),
         exists_trace(
             "pi",
             land(land(land(labeled_atom(Q, "add", "pi"),
                            eventually(land(x_at("pi_y1"),
                                            labeled_atom(Q, "arg1", "pi")))),
                       eventually(land(x_at("pi_y2"), labeled_atom(Q, "arg2", "pi")))),
                  eventually(land(x_at("pi_y"), labeled_atom(Q, "res", "pi"))))));
  expect("hyp prod", hyp(a_prod("y1", "y2", "y"), markers),
         exists_trace(
             "pi",
             land(land(land(labeled_atom(Q, "mult", "pi"),
                            eventually(land(x_at("pi_y1"),
                                            labeled_atom(Q, "arg1", "pi")))),
                       eventually(land(x_at("pi_y2"), labeled_atom(Q, "arg2", "pi")))),
                  eventually(land(x_at("pi_y"), labeled_atom(Q, "res", "pi"))))));

  Lemma3Names n3;
  n3.props = {"p"};
  n3.all_props = {"p_all"};
  n3.temp_props = {"p_temp"};
  n3.marker = {{"X", "m1"}};
  n3.pi = "pi";
  n3.pi2 = "pi'";

  Formula theta_complete = lemma3_theta_complete(n3);
  expect("lemma3 theta_complete", theta_complete,
         forall_prop(
             "p_temp",
             forall_trace("pi", exists_trace("pi'",
                                             always(iff(
                                                 labeled_atom(QP, "p_temp", "pi"),
                                                 labeled_atom(QP, "p_all", "pi'")))))));

  Formula theta_cons_j = lemma3_theta_cons_j(n3, "m1");
  expect("lemma3 theta_cons_j", theta_cons_j,
         forall_trace(
             "pi",
             land(next(always(lnot(labeled_atom(QP, "m1", "pi")))),
                  forall_trace("pi'",
                               implies(always(iff(labeled_atom(QP, "p_all", "pi"),
                                                  labeled_atom(QP, "p_all", "pi'"))),
                                       iff(labeled_atom(QP, "m1", "pi"),
                                           labeled_atom(QP, "m1", "pi'")))))));

  Formula pd = labeled_atom(H2, "p", "pid");
  Formula body_d = exists_trace_in("pid", SetVar::discourse(), pd);
  expect("lemma3 exists-set", lemma3_fprime(exists_set(SetVar("X"), body_d), n3),
         exists_prop("m1", land(theta_cons_j,
                                exists_trace("pid", labeled_atom(QP, "p", "pid")))));
  expect("lemma3 forall-set", lemma3_fprime(forall_set(SetVar("X"), body_d), n3),
         forall_prop("m1", implies(theta_cons_j,
                                   exists_trace("pid", labeled_atom(QP, "p", "pid")))));
  expect("lemma3 exists-in-X",
         lemma3_fprime(
             exists_trace_in("pix", SetVar("X"), labeled_atom(H2, "p", "pix")), n3),
         exists_trace("pix", land(labeled_atom(QP, "m1", "pix"),
                                  labeled_atom(QP, "p_all", "pix"))));
  expect("lemma3 forall-in-X",
         lemma3_fprime(
             forall_trace_in("pix", SetVar("X"), labeled_atom(H2, "p", "pix")), n3),
         forall_trace("pix", implies(labeled_atom(QP, "m1", "pix"),
                                     labeled_atom(QP, "p_all", "pix"))));
  expect("lemma3 exists-in-Xa",
         lemma3_fprime(
             exists_trace_in("pia", SetVar::all(), labeled_atom(H2, "p", "pia")), n3),
         exists_trace("pia", labeled_atom(QP, "p_all", "pia")));
  expect("lemma3 forall-in-Xa",
         lemma3_fprime(
             forall_trace_in("pia", SetVar::all(), labeled_atom(H2, "p", "pia")), n3),
         forall_trace("pia", labeled_atom(QP, "p_all", "pia")));
  expect("lemma3 exists-in-Xd",
         lemma3_fprime(exists_trace_in("pid", SetVar::discourse(), pd), n3),
         exists_trace("pid", labeled_atom(QP, "p", "pid")));
  expect("lemma3 forall-in-Xd",
         lemma3_fprime(forall_trace_in("pid", SetVar::discourse(), pd), n3),
         forall_trace("pid", labeled_atom(QP, "p", "pid")));
  expect("lemma3 not", lemma3_fprime(lnot(pd), n3), lnot(labeled_atom(QP, "p", "pid")));
  expect("lemma3 or", lemma3_fprime(lor(pd, pd), n3),
         lor(labeled_atom(QP, "p", "pid"), labeled_atom(QP, "p", "pid")));
  expect("lemma3 next", lemma3_fprime(next(pd), n3), next(labeled_atom(QP, "p", "pid")));
  expect("lemma3 eventually", lemma3_fprime(eventually(pd), n3),
         eventually(labeled_atom(QP, "p", "pid")));
  expect("lemma3 atom", lemma3_fprime(pd, n3), labeled_atom(QP, "p", "pid"));

  std::vector<std::string> ap4 = {"p", "q"};
  Formula theta_q =
      lemma4_theta_q("q", SetVar("X1"), SetVar::discourse(), ap4, "pi", "pi'");
  Formula g_pp = always(iff(labeled_atom(H2, "p", "pi"), labeled_atom(H2, "p", "pi'")));
  expect("lemma4 theta_q", theta_q,
         land(forall_trace_in("pi", SetVar("X1"),
                              exists_trace_in("pi'", SetVar::discourse(), g_pp)),
              forall_trace_in("pi", SetVar::discourse(),
                              exists_trace_in("pi'", SetVar("X1"), g_pp))));

  auto fp = [&](const Formula& f) {
    ReductionContext ctx;
    ctx.reserve("p");
    ctx.reserve("q");
    return lemma4_fprime(f, SetVar::discourse(), ap4, ctx);
  };
  Formula pq = labeled_atom(QP, "p", "pi0");
  expect("lemma4 exists-trace", fp(exists_trace("pi0", pq)),
         exists_trace_in("pi0", SetVar::discourse(), labeled_atom(H2, "p", "pi0")));
  expect("lemma4 forall-trace", fp(forall_trace("pi0", pq)),
         forall_trace_in("pi0", SetVar::discourse(), labeled_atom(H2, "p", "pi0")));
  expect("lemma4 exists-prop", fp(exists_prop("q", pq)),
         exists_set(SetVar("X1"), land(theta_q, labeled_atom(H2, "p", "pi0"))));
  expect("lemma4 forall-prop", fp(forall_prop("q", pq)),
         forall_set(SetVar("X1"), implies(theta_q, labeled_atom(H2, "p", "pi0"))));
  expect("lemma4 not", fp(lnot(pq)), lnot(labeled_atom(H2, "p", "pi0")));
  expect("lemma4 or", fp(lor(pq, pq)),
         lor(labeled_atom(H2, "p", "pi0"), labeled_atom(H2, "p", "pi0")));
  expect("lemma4 next", fp(next(pq)), next(labeled_atom(H2, "p", "pi0")));
  expect("lemma4 eventually", fp(eventually(pq)),
         eventually(labeled_atom(H2, "p", "pi0")));
  expect("lemma4 atom", fp(pq), labeled_atom(H2, "p", "pi0"));

  return r;
}

SuiteResult two_variable_suite(const std::string& corpus_dir) {
  SuiteResult r;
  r.suite = "two-variable";
  for (const auto& c :
       load_cases(corpus_dir + "/hqptlplus", FileLogic::HyperQPTLPlus)) {
    ++r.cases;
    try {
      Formula nested = hqptlplus_to_h2l_nested(c.sentence);
      std::size_t live = max_live_set_vars(nested);
      if (live > 2) {
        ++r.failures;
        r.notes.push_back(c.path + ": " + std::to_string(live) + " live set variables");
      }
    } catch (const std::exception& e) {
      ++r.failures;
      r.notes.push_back(c.path + ": " + e.what());
    }
  }
  if (r.cases == 0) {
    r.failures = 1;
    r.notes.push_back("no HyperQPTL+ corpus cases found under " + corpus_dir);
  }
  return r;
}

}  // namespace hyperq::verify
