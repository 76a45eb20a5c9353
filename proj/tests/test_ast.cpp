// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hyperq/ast.hpp"
#include "hyperq/eval.hpp"
#include "hyperq/syntax.hpp"
#include "hyperq/trace.hpp"

using namespace hyperq;

namespace {
constexpr Logic Q = Logic::HyperQPTL;
constexpr Logic QP = Logic::HyperQPTLPlus;
constexpr Logic H2 = Logic::Hyper2LTL;

TraceSet random_model(const Alphabet& ap, std::mt19937_64& rng, int max_members,
                      const UniverseParams& params) {
  TraceSet universe = enumerate_universe(ap, params);
  std::uniform_int_distribution<int> count(1, max_members);
  std::uniform_int_distribution<std::size_t> pick(0, universe.size() - 1);
  std::vector<LassoTrace> members;
  int c = count(rng);
  for (int i = 0; i < c; ++i) members.push_back(universe.members()[pick(rng)]);
  return TraceSet(ap, std::move(members));
}
}  // namespace

TEST_CASE("cross-logic variants are rejected at construction") {
  CHECK_THROWS_AS(exists_trace("pi", labeled_atom(H2, "p", "pi")), LogicViolation);
  CHECK_THROWS_AS(exists_trace_in("pi", SetVar("X"), labeled_atom(Q, "p", "pi")),
                  LogicViolation);
  CHECK_THROWS_AS(exists_prop("q", labeled_atom(H2, "p", "pi")), LogicViolation);
  CHECK_THROWS_AS(exists_set(SetVar("X"), labeled_atom(QP, "p", "pi")),
                  LogicViolation);
  CHECK_THROWS_AS(lor(labeled_atom(Q, "p", "pi"), labeled_atom(QP, "p", "pi")),
                  LogicViolation);
  CHECK_THROWS_AS(exists_set(SetVar::all(), labeled_atom(H2, "p", "pi")),
                  LogicViolation);
  CHECK_THROWS_AS(exists_set(SetVar::discourse(), labeled_atom(H2, "p", "pi")),
                  LogicViolation);
  CHECK_THROWS_AS(labeled_atom(Q, "Xd", "pi"), LogicViolation);
  // unlabeled atoms exist only in HyperQPTL; the factory pins the logic
  CHECK(prop_atom("q").logic() == Q);
}

TEST_CASE("free_vars examples") {
  Formula f1 = labeled_atom(Q, "p", "pi");
  FreeVars v1 = free_vars(f1);
  CHECK(v1.trace_vars == std::set<std::string>{"pi"});
  CHECK(v1.props.empty());
  CHECK(v1.set_vars.empty());

  Formula f2 = exists_trace("pi", land(labeled_atom(Q, "p", "pi"), prop_atom("q")));
  FreeVars v2 = free_vars(f2);
  CHECK(v2.trace_vars.empty());
  CHECK(v2.props == std::set<std::string>{"q"});

  Formula f3 = forall_trace_in("pi", SetVar("X"), labeled_atom(H2, "p", "pi"));
  FreeVars v3 = free_vars(f3);
  CHECK(v3.trace_vars.empty());
  CHECK(v3.set_vars == std::set<std::string>{"X"});
}

TEST_CASE("check_sentence examples") {
  CHECK(check_sentence(exists_trace("pi", labeled_atom(Q, "p", "pi"))));
  CHECK_FALSE(check_sentence(labeled_atom(Q, "p", "pi")));
  CHECK(check_sentence(
      forall_trace_in("pi", SetVar::discourse(), labeled_atom(H2, "p", "pi"))));
  CHECK_FALSE(check_sentence(
      forall_trace_in("pi", SetVar("X"), labeled_atom(H2, "p", "pi"))));
  CHECK_FALSE(check_sentence(exists_trace("pi", prop_atom("q"))));
  CHECK(check_sentence(forall_prop("q", exists_trace("pi", prop_atom("q")))));
}

TEST_CASE("expand_sugar basic rewrites") {
  Formula gp = always(labeled_atom(Q, "p", "pi"));
  Formula expanded = expand_sugar(gp);
  CHECK(expanded == lnot(eventually(lnot(labeled_atom(Q, "p", "pi")))));

  Formula atom = labeled_atom(QP, "p", "pi");
  CHECK(expand_sugar(atom) == atom);

  // Hyper2LTL: F p becomes (true) U p with true = !p | p
  Formula fp = eventually(labeled_atom(H2, "p", "pi"));
  Formula h2lexp = expand_sugar(fp);
  Formula p = labeled_atom(H2, "p", "pi");
  CHECK(h2lexp == until(lor(lnot(p), p), p));
}

TEST_CASE("expand_sugar produces core connectives only") {
  auto core_only = [](const Formula& f, Logic logic) {
    std::function<bool(const Formula&)> ok = [&](const Formula& g) {
      switch (g.kind()) {
        case Kind::And:
        case Kind::Implies:
        case Kind::Iff:
        case Kind::Always:
          return false;
        case Kind::Until:
          if (logic != H2) return false;
          break;
        case Kind::Eventually:
          if (logic == H2) return false;
          break;
        default:
          break;
      }
      const Node& n = g.node();
      if (n.a && !ok(n.a)) return false;
      if (n.b && !ok(n.b)) return false;
      return true;
    };
    return ok(f);
  };
  Formula a = labeled_atom(Q, "p", "pi");
  Formula b = prop_atom("q");
  Formula f = exists_trace("pi", iff(land(a, b), until(a, implies(b, a))));
  Formula e = expand_sugar(f);
  CHECK(core_only(e, Q));
  CHECK(expand_sugar(e) == e);  // idempotent

  Formula h = forall_trace_in(
      "pi", SetVar::discourse(),
      always(iff(labeled_atom(H2, "p", "pi"), eventually(labeled_atom(H2, "q", "pi")))));
  Formula he = expand_sugar(h);
  CHECK(core_only(he, H2));
  CHECK(expand_sugar(he) == he);
}

TEST_CASE("expand_sugar preserves bounded semantics") {
  Alphabet ap({"p", "q"});
  UniverseParams params(1, 2);
  EvalParams ep(params, ap);
  std::mt19937_64 rng(101);

  // F p over Hyper2LTL against its Until encoding, and sugar-heavy HyperQPTL
  // sentences against their cores, on random lasso models
  for (int round = 0; round < 200; ++round) {
    TraceSet model = random_model(ap, rng, 3, params);

    Formula h2l = exists_trace_in(
        "pi", SetVar::discourse(),
        land(eventually(labeled_atom(H2, "p", "pi")),
             always(lor(labeled_atom(H2, "q", "pi"),
                        lnot(labeled_atom(H2, "q", "pi"))))));
    CHECK(eval_hyper2ltl(model, h2l, ep) == eval_hyper2ltl(model, expand_sugar(h2l), ep));

    Formula qf = forall_trace(
        "pi", implies(labeled_atom(Q, "p", "pi"),
                      iff(labeled_atom(Q, "q", "pi"), labeled_atom(Q, "p", "pi"))));
    CHECK(eval_hyperqptl(model, qf, ep) == eval_hyperqptl(model, expand_sugar(qf), ep));
  }
}

TEST_CASE("until expansion introduces one fresh quantified proposition") {
  Formula a = labeled_atom(Q, "p", "pi");
  Formula b = labeled_atom(Q, "q", "pi");
  Formula u = exists_trace("pi", until(a, b));
  Formula e = expand_sugar(u);
  // the encoding quantifies a proposition not present in the input
  NameSets names = all_names(e);
  CHECK(names.props.count("u0") == 1);
  CHECK(all_names(u).props.count("u0") == 0);
}

TEST_CASE("until expansion is semantically faithful at adequate bounds") {
  Alphabet ap({"p", "q", "u0"});
  UniverseParams params(2, 2);
  EvalParams ep(params, ap);
  std::mt19937_64 rng(33);
  for (int round = 0; round < 60; ++round) {
    TraceSet model = random_model(ap, rng, 2, params);
    Formula u = exists_trace(
        "pi", until(labeled_atom(Q, "p", "pi"), labeled_atom(Q, "q", "pi")));
    CHECK(eval_hyperqptl(model, u, ep) == eval_hyperqptl(model, expand_sugar(u), ep));
  }
}

TEST_CASE("rename_apart examples") {
  Formula twice = lor(exists_trace("pi", labeled_atom(Q, "p", "pi")),
                      exists_trace("pi", labeled_atom(Q, "q", "pi")));
  Formula renamed = rename_apart(twice);
  Formula expected = lor(exists_trace("pi", labeled_atom(Q, "p", "pi")),
                         exists_trace("pi1", labeled_atom(Q, "q", "pi1")));
  CHECK(renamed == expected);

  Formula apart = exists_trace("pi", lor(labeled_atom(Q, "p", "pi"),
                                         labeled_atom(Q, "q", "pi")));
  CHECK(rename_apart(apart) == apart);

  Formula qq = forall_prop("q", exists_prop("q", prop_atom("q")));
  Formula qq_expected = forall_prop("q", exists_prop("q1", prop_atom("q1")));
  CHECK(rename_apart(qq) == qq_expected);
}

TEST_CASE("rename_apart preserves bounded satisfaction") {
  // renaming introduces fresh proposition names (q -> q1), so both sides are
  // evaluated over the union alphabet
  Alphabet ap({"p", "q", "q1"});
  UniverseParams params(1, 1);
  EvalParams ep(params, ap);
  std::mt19937_64 rng(55);
  Formula f = lor(exists_trace("pi", labeled_atom(Q, "p", "pi")),
                  exists_trace("pi", forall_trace("pi2", iff(labeled_atom(Q, "q", "pi"),
                                                             labeled_atom(Q, "q", "pi2")))));
  Formula g = forall_prop("q", exists_prop("q", prop_atom("q")));
  for (int round = 0; round < 100; ++round) {
    TraceSet model = random_model(ap, rng, 3, params);
    CHECK(eval_hyperqptl(model, f, ep) == eval_hyperqptl(model, rename_apart(f), ep));
    CHECK(eval_hyperqptl(model, g, ep) == eval_hyperqptl(model, rename_apart(g), ep));
  }
}

TEST_CASE("check_sentence is invariant under rename_apart") {
  Formula s = forall_prop("q", exists_trace("pi", land(prop_atom("q"),
                                                       labeled_atom(Q, "p", "pi"))));
  Formula open = lor(exists_trace("pi", labeled_atom(Q, "p", "pi")),
                     labeled_atom(Q, "p", "pi"));
  CHECK(check_sentence(s) == check_sentence(rename_apart(s)));
  CHECK(check_sentence(open) == check_sentence(rename_apart(open)));
  CHECK_FALSE(check_sentence(rename_apart(open)));
}

TEST_CASE("to_prenex examples") {
  // exists pi . p[pi] & forall pi' . q[pi']  ~>  exists pi . forall pi' . (p & q)
  Formula in = exists_trace(
      "pi", land(labeled_atom(Q, "p", "pi"),
                 forall_trace("pi'", labeled_atom(Q, "q", "pi'"))));
  Formula out = to_prenex(in);
  Formula expected = exists_trace(
      "pi", forall_trace("pi'", land(labeled_atom(Q, "p", "pi"),
                                     labeled_atom(Q, "q", "pi'"))));
  CHECK(out == expected);

  CHECK(to_prenex(expected) == expected);  // already prenex

  Formula bad = eventually(exists_trace("pi", labeled_atom(Q, "p", "pi")));
  CHECK_THROWS_AS(to_prenex(bad), ShapeError);
}

TEST_CASE("to_prenex flips quantifiers under negation and antecedents") {
  Formula in = lnot(exists_trace("pi", labeled_atom(Q, "p", "pi")));
  Formula out = to_prenex(in);
  CHECK(out == forall_trace("pi", lnot(labeled_atom(Q, "p", "pi"))));

  Formula imp = implies(exists_trace("pi", labeled_atom(Q, "p", "pi")),
                        prop_atom("q"));
  Formula out2 = to_prenex(imp);
  CHECK(out2 == forall_trace("pi", implies(labeled_atom(Q, "p", "pi"), prop_atom("q"))));
}

TEST_CASE("to_prenex preserves bounded semantics") {
  Alphabet ap({"p", "q"});
  UniverseParams params(1, 1);
  EvalParams ep(params, ap);
  std::mt19937_64 rng(77);
  std::vector<Formula> pool = {
      land(exists_trace("pi", labeled_atom(Q, "p", "pi")),
           forall_trace("pi", eventually(labeled_atom(Q, "q", "pi")))),
      lnot(lor(exists_trace("pi", always(labeled_atom(Q, "p", "pi"))),
               forall_prop("q", exists_trace("pi", iff(prop_atom("q"),
                                                       labeled_atom(Q, "p", "pi")))))),
      implies(forall_trace("pi", labeled_atom(Q, "p", "pi")),
              exists_trace("pi'", labeled_atom(Q, "q", "pi'"))),
      iff(exists_trace("pi", labeled_atom(Q, "p", "pi")),
          exists_trace("pi'", labeled_atom(Q, "q", "pi'"))),
  };
  for (int round = 0; round < 50; ++round) {
    TraceSet model = random_model(ap, rng, 3, params);
    for (const auto& f : pool) {
      Formula pf = to_prenex(f);
      // prenex shape: prefix then quantifier-free matrix
      Formula cur = pf;
      while (cur.kind() == Kind::TraceQuant || cur.kind() == Kind::PropQuant ||
             cur.kind() == Kind::SetQuant) {
        cur = cur.node().a;
      }
      CHECK(is_quantifier_free(cur));
      CHECK(eval_hyperqptl(model, f, ep) == eval_hyperqptl(model, pf, ep));
    }
  }
}
