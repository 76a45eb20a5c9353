// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hyperq/syntax.hpp"
#include "hyperq/verify.hpp"

using namespace hyperq;

namespace {
constexpr Logic Q = Logic::HyperQPTL;
constexpr Logic QP = Logic::HyperQPTLPlus;
constexpr Logic H2 = Logic::Hyper2LTL;
}  // namespace

TEST_CASE("parsing the theta_all matrix shape") {
  Formula f = parse_formula("existsP q . exists pi . G (q <-> x[pi])", Q);
  Formula expected = exists_prop(
      "q", exists_trace("pi", always(iff(prop_atom("q"),
                                         labeled_atom(Q, "x", "pi")))));
  CHECK(f == expected);
}

TEST_CASE("atoms") {
  CHECK(parse_formula("p[pi]", QP) == labeled_atom(QP, "p", "pi"));
  CHECK(parse_formula("q", Q) == prop_atom("q"));
  CHECK(parse_formula("AXIOM_PLUS_TIMES", Q) == axiom_plus_times());
}

TEST_CASE("membership quantifier") {
  Formula f = parse_formula("exists pi in Xd . p[pi]", H2);
  CHECK(f == exists_trace_in("pi", SetVar::discourse(), labeled_atom(H2, "p", "pi")));
  Formula g = parse_formula("forallS X0 . forall pi in X0 . p[pi]", H2);
  CHECK(g == forall_set(SetVar("X0"),
                        forall_trace_in("pi", SetVar("X0"), labeled_atom(H2, "p", "pi"))));
}

TEST_CASE("precedence") {
  // unary > U > & > | > -> > <->
  Formula f = parse_formula("!p[pi] & q | r -> p[pi] <-> q", Q);
  Formula p = labeled_atom(Q, "p", "pi");
  Formula expected =
      iff(implies(lor(land(lnot(p), prop_atom("q")), prop_atom("r")), p),
          prop_atom("q"));
  CHECK(f == expected);

  Formula u = parse_formula("p[pi] U q U r", Q);
  CHECK(u == until(labeled_atom(Q, "p", "pi"), until(prop_atom("q"), prop_atom("r"))));

  Formula xf = parse_formula("X F G p[pi]", Q);
  CHECK(xf == next(eventually(always(labeled_atom(Q, "p", "pi")))));
}

TEST_CASE("quantifier scope extends to the end of the group") {
  Formula f = parse_formula("p[pi] & (exists pi' . q[pi'] | r[pi'])", QP);
  Formula expected =
      land(labeled_atom(QP, "p", "pi"),
           exists_trace("pi'", lor(labeled_atom(QP, "q", "pi'"),
                                   labeled_atom(QP, "r", "pi'"))));
  CHECK(f == expected);
}

TEST_CASE("arith parsing") {
  ArithFormula f = parse_arith("exists1 y . y + y = z");
  CHECK(f == a_exists(1, "y", a_sum("y", "y", "z")));
  ArithFormula g = parse_arith("exists3 YY . exists2 Y . Y in YY");
  CHECK(g == a_exists(3, "YY", a_exists(2, "Y", a_in_family("Y", "YY"))));
  ArithFormula h = parse_arith("forall1 y . !(y < y)");
  CHECK(h == a_forall(1, "y", a_not(a_less("y", "y"))));
  ArithFormula m = parse_arith("exists2 Y . y in Y & y * y = z");
  CHECK(m == a_exists(2, "Y", a_and(a_in("y", "Y"), a_prod("y", "y", "z"))));
}

TEST_CASE("errors carry positions") {
  try {
    parse_formula("exists pi . (p[pi]", Q);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column > 1);
  }
  try {
    parse_formula("\n\n  q[", QP);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("negative corpus: logic-violating inputs are rejected") {
  // each entry: (text, logic); all must fail to parse
  const std::vector<std::pair<std::string, Logic>> bad = {
      {"q", QP},                                   // bare atom outside HyperQPTL
      {"q", H2},                                   // bare atom in Hyper2LTL
      {"exists pi . q", QP},                       // bare atom under quantifier
      {"existsS X0 . p[pi]", Q},                   // set quantifier in HyperQPTL
      {"existsS X0 . p[pi]", QP},                  // set quantifier in HyperQPTL+
      {"exists pi in X0 . p[pi]", Q},              // membership domain in HyperQPTL
      {"exists pi in X0 . p[pi]", QP},             // membership domain in HyperQPTL+
      {"exists pi . p[pi]", H2},                   // missing domain in Hyper2LTL
      {"existsP q . q[pi]", H2},                   // prop quantifier in Hyper2LTL
      {"existsS Xa . p[pi]", H2},                  // quantifying the Xa variable
      {"existsS Xd . p[pi]", H2},                  // quantifying the Xd variable
      {"AXIOM_PLUS_TIMES", QP},                    // axiom leaf outside HyperQPTL
      {"AXIOM_PLUS_TIMES", H2},
      {"p[Xa]", Q},                                // reserved name as trace variable
      {"Xa", Q},                                   // reserved name as proposition
      {"exists Xd . p[Xd]", Q},                    // reserved name bound as trace var
      {"existsP Xa . p[pi]", Q},                   // reserved name as proposition
      {"exists1 y . y", Q},                        // arithmetic keyword in temporal
      {"p[pi] <->", Q},                            // dangling connective
      {"(p[pi]", Q},                               // unbalanced parenthesis
      {"p[pi] q[pi]", Q},                          // missing connective
      {"exists pi p[pi]", Q},                      // missing dot
      {"", Q},                                     // empty input
  };
  for (const auto& [text, logic] : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_formula(text, logic), ParseError);
  }
  const std::vector<std::string> bad_arith = {
      "y < Y & y in Y",      // Y used at orders 1 and 2
      "exists2 Y . Y < Y",   // second-order var in a first-order atom
      "y in Y & Y in y",     // y would need orders 1 and 3 at once
      "exists1 y . y in y",  // self-membership forces inconsistent orders
  };
  for (const auto& text : bad_arith) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_arith(text), ParseError);
  }
}

TEST_CASE("round-trip on fuzzed ASTs") {
  std::mt19937_64 rng(99);
  for (Logic logic : {Q, QP, H2}) {
    for (int i = 0; i < 300; ++i) {
      Formula f = verify::random_formula(logic, rng, 8);
      Formula g = parse_formula(print_formula(f), logic);
      if (!(g == f)) {
        CAPTURE(print_formula(f));
        REQUIRE(g == f);
      }
    }
  }
  for (int i = 0; i < 300; ++i) {
    ArithFormula f = verify::random_arith_formula(rng, 8);
    ArithFormula g = parse_arith(print_arith(f));
    if (!(g == f)) {
      CAPTURE(print_arith(f));
      REQUIRE(g == f);
    }
  }
}

TEST_CASE("deep formula round-trips") {
  // depth 12, fully parenthesized where precedence demands
  Formula f = labeled_atom(Q, "p", "pi");
  for (int i = 0; i < 12; ++i) {
    f = lor(land(next(f), eventually(f)), lnot(f));
  }
  CHECK(parse_formula(print_formula(f), Q) == f);
}

TEST_CASE("file headers select the grammar") {
  ParsedFile pf = parse_file_text("#logic: hqptl+\n# a comment\nexists pi . p[pi]\n");
  CHECK(pf.logic == FileLogic::HyperQPTLPlus);
  CHECK(std::get<Formula>(pf.formula) ==
        exists_trace("pi", labeled_atom(QP, "p", "pi")));

  ParsedFile ar = parse_file_text("#logic: arith\nexists1 y . y < z\n");
  CHECK(ar.logic == FileLogic::Arith);

  CHECK_THROWS_AS(parse_file_text("p[pi]\n"), Error);  // no tag anywhere
  ParsedFile forced = parse_file_text("p[pi]\n", FileLogic::HyperQPTL);
  CHECK(forced.logic == FileLogic::HyperQPTL);
}
