// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hyperq/arith.hpp"
#include "hyperq/eval.hpp"
#include "hyperq/reductions.hpp"
#include "hyperq/syntax.hpp"
#include "hyperq/verify.hpp"

#include <algorithm>
#include <random>

using namespace hyperq;

namespace {
constexpr Logic Q = Logic::HyperQPTL;

LassoTrace mk(const Alphabet& ap, const std::vector<std::vector<std::string>>& stem,
              const std::vector<std::vector<std::string>>& loop) {
  std::vector<Letter> s, l;
  for (const auto& letter : stem) s.push_back(make_letter(ap, letter));
  for (const auto& letter : loop) l.push_back(make_letter(ap, letter));
  return LassoTrace(ap, std::move(s), std::move(l));
}
}  // namespace

TEST_CASE("structural fidelity of every displayed case") {
  auto r = verify::structural_fidelity_suite();
  CHECK(r.cases >= 28);
  for (const auto& note : r.notes) {
    CAPTURE(note);
  }
  CHECK(r.failures == 0);
  if (r.failures) {
    for (const auto& note : r.notes) MESSAGE(note);
  }
}

TEST_CASE("t_plus_times_member examples") {
  Alphabet ap({"arg1", "arg2", "res", "add", "mult"});
  Letter add = make_letter(ap, {"add"});
  Letter mult = make_letter(ap, {"mult"});

  // add-trace: arg1 at 2, arg2 at 3, res at 5
  std::vector<Letter> s(6, add);
  s[2] |= make_letter(ap, {"arg1"});
  s[3] |= make_letter(ap, {"arg2"});
  s[5] |= make_letter(ap, {"res"});
  CHECK(t_plus_times_member(LassoTrace(ap, s, {add})));

  // mult-trace: 2 * 3 = 6
  std::vector<Letter> m(7, mult);
  m[2] |= make_letter(ap, {"arg1"});
  m[3] |= make_letter(ap, {"arg2"});
  m[6] |= make_letter(ap, {"res"});
  CHECK(t_plus_times_member(LassoTrace(ap, m, {mult})));

  // add-trace claiming 2 + 3 = 7
  std::vector<Letter> w(8, add);
  w[2] |= make_letter(ap, {"arg1"});
  w[3] |= make_letter(ap, {"arg2"});
  w[7] |= make_letter(ap, {"res"});
  CHECK_FALSE(t_plus_times_member(LassoTrace(ap, w, {add})));

  // res in the loop occurs infinitely often: not unique
  std::vector<Letter> inf(4, add);
  inf[2] |= make_letter(ap, {"arg1"});
  inf[3] |= make_letter(ap, {"arg2"});
  CHECK_FALSE(t_plus_times_member(
      LassoTrace(ap, inf, {add | make_letter(ap, {"res"})})));

  // both operations marked
  std::vector<Letter> b(2, add | mult);
  b[0] |= make_letter(ap, {"arg1", "arg2", "res"});
  CHECK_FALSE(t_plus_times_member(LassoTrace(ap, b, {add | mult})));

  Alphabet missing({"arg1"});
  CHECK_THROWS_AS(t_plus_times_member(LassoTrace(missing, {}, {0})),
                  AlphabetError);
}

TEST_CASE("theta_cons rejects bad markings") {
  // alphabet of the Lemma 1 reduction with one marker
  Alphabet ap({"x", "q", "m1", "arg1", "arg2", "res", "add", "mult"});
  EvalParams ep(UniverseParams(2, 1), ap);
  Formula theta = build_theta_cons(1);
  Formula sentence = theta;  // already a sentence (pi, pi' bound)

  // two x-identical traces with consistent markers: fine
  TraceSet good(ap, {mk(ap, {{"x", "m1"}}, {{}}), mk(ap, {{"x"}, {"q"}}, {{}})});
  // m1 only at position 0 on the first; second differs in x? no: x at 0 both
  CHECK_FALSE(eval_hyperqptl(good, sentence, ep));  // markings disagree at 0

  TraceSet consistent(ap, {mk(ap, {{"x", "m1"}}, {{}}), mk(ap, {{"q", "x", "m1"}}, {{}})});
  CHECK(eval_hyperqptl(consistent, sentence, ep));

  // marker at position 2 violates X G !m
  TraceSet late(ap, {mk(ap, {{"x"}, {}, {"m1"}}, {{}})});
  CHECK_FALSE(eval_hyperqptl(late, sentence, ep));

  CHECK_THROWS_AS(build_theta_cons(0), ShapeError);
}

TEST_CASE("sigma21_to_hyperqptl assembles the pipeline") {
  // k = 1: a marker and theta_cons appear
  ArithFormula phi = parse_arith("exists3 YY . exists2 Y . Y in YY");
  Formula out = sigma21_to_hyperqptl(phi);
  NameSets names = all_names(out);
  CHECK(names.props.count("m1") == 1);
  CHECK(names.props.count("x") == 1);
  // prenex: quantifier prefix over a quantifier-free matrix
  Formula cur = out;
  while (cur.kind() == Kind::TraceQuant || cur.kind() == Kind::PropQuant) {
    cur = cur.node().a;
  }
  CHECK(is_quantifier_free(cur));

  // k = 0: no marker, conjunct dropped
  ArithFormula flat = parse_arith("exists1 y . y < z");
  Formula out0 = sigma21_to_hyperqptl(flat);
  NameSets names0 = all_names(out0);
  CHECK(names0.props.count("m1") == 0);
  CHECK(names0.props.count("x") == 1);

  // shape violations are rejected
  CHECK_THROWS_AS(sigma21_to_hyperqptl(parse_arith("forall3 YY . exists2 Y . Y in YY")),
                  ShapeError);
}

TEST_CASE("instance_formula composes theta_eq with the translation") {
  // phi(x) = exists3 YY . exists2 Y . (Y in YY & x in Y)
  ArithFormula phi_x =
      a_exists(3, "YY", a_exists(2, "Y", a_and(a_in_family("Y", "YY"), a_in("x", "Y"))));
  for (std::uint64_t n : {0ULL, 1ULL, 6ULL}) {
    Formula inst = instance_formula(n, phi_x);
    // built without errors and prenex; theta_{=n} uniqueness re-verified
    ArithFormula theta = build_theta_eq_n(n);
    BoundedDomain dom(8);
    int hits = 0;
    for (std::uint64_t v = 0; v < 8; ++v) {
      ArithAssignment a;
      a.first["x"] = v;
      if (eval_arith(theta, dom, a)) ++hits;
    }
    CHECK(hits == 1);
    CHECK(all_names(inst).props.count("m1") == 1);
    Formula cur = inst;
    while (cur.kind() == Kind::TraceQuant || cur.kind() == Kind::PropQuant) {
      cur = cur.node().a;
    }
    CHECK(is_quantifier_free(cur));
  }
}

TEST_CASE("freshness: generated names never collide with the input") {
  // input reuses the names the translation would like to generate; the
  // context must step around every one of them
  Formula phi = parse_formula(
      "existsS Y . exists pi in Y . (p_all[pi] & m1[pi] & p_temp[pi])",
      Logic::Hyper2LTL);
  Formula out = h2l_to_hqptlplus_nested(phi);
  NameSets names = all_names(out);
  // the marker for Y avoids the input proposition m1
  CHECK(names.props.count("m11") == 1);
  // fresh all-projections of the awkwardly named inputs exist
  CHECK(names.props.count("p_all_all") == 1);
  CHECK(names.props.count("m1_all") == 1);
  CHECK(names.props.count("p_temp_all") == 1);
}

namespace {

// prenex-style sentences: quantifier prefix over a quantifier-free matrix
Formula random_sentence(Logic logic, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  int quants = len(rng);
  std::vector<std::string> tvars;
  std::vector<int> kinds;  // 0 = trace, 1 = prop/set
  for (int i = 0; i < quants; ++i) kinds.push_back(coin(rng));
  if (std::find(kinds.begin(), kinds.end(), 0) == kinds.end()) kinds[0] = 0;
  int ti = 0;
  for (int k : kinds) {
    if (k == 0) tvars.push_back("pi" + std::to_string(++ti));
  }
  Formula matrix = verify::random_qf_matrix(logic, rng, 4, tvars, {});
  Formula f = matrix;
  int prop_i = 0;
  int t_left = ti;
  for (auto it = kinds.rbegin(); it != kinds.rend(); ++it) {
    bool ex = coin(rng) == 0;
    if (*it == 0) {
      std::string v = "pi" + std::to_string(t_left--);
      if (logic == Logic::Hyper2LTL) {
        f = ex ? exists_trace_in(v, SetVar::discourse(), f)
               : forall_trace_in(v, SetVar::discourse(), f);
      } else {
        f = ex ? exists_trace(v, f) : forall_trace(v, f);
      }
    } else if (logic == Logic::Hyper2LTL) {
      SetVar x("S" + std::to_string(++prop_i));
      f = ex ? exists_set(x, f) : forall_set(x, f);
    } else {
      std::string q = "w" + std::to_string(++prop_i);
      f = ex ? exists_prop(q, f) : forall_prop(q, f);
    }
  }
  return f;
}

}  // namespace

TEST_CASE("polynomial size on fuzzed sentences") {
  std::mt19937_64 rng(404);
  for (int round = 0; round < 60; ++round) {
    Formula phi = random_sentence(Logic::HyperQPTLPlus, rng);
    Formula out = hqptlplus_to_h2l(phi);
    std::size_t in_size = node_count(phi);
    std::size_t out_size = node_count(out);
    CHECK(out_size <= 40 * in_size * in_size + 200);
  }
  for (int round = 0; round < 60; ++round) {
    Formula phi = random_sentence(Logic::Hyper2LTL, rng);
    Formula out = h2l_to_hqptlplus(phi);
    std::size_t in_size = node_count(phi);
    std::size_t out_size = node_count(out);
    CHECK(out_size <= 40 * in_size * in_size + 200);
  }
}

TEST_CASE("lemma 3 translation dual-evaluates on a tiny instance") {
  // exists pi in Xd . p[pi] over a model with a p-trace
  Formula phi = parse_formula("exists pi in Xd . p[pi]", Logic::Hyper2LTL);
  Formula out = h2l_to_hqptlplus(phi);
  CHECK(out.logic() == Logic::HyperQPTLPlus);
  CHECK(check_sentence(out));

  Alphabet ap({"p"});
  TraceSet model(ap, {mk(ap, {}, {{"p"}})});
  UniverseParams bounds(1, 1);
  bool lhs = eval_hyper2ltl(model, phi, EvalParams(bounds, ap));

  std::vector<std::string> ext_names = ap.names();
  for (const auto& p : props_in_order(out)) ext_names.push_back(p);
  Alphabet ext(ext_names);
  EvalParams dst(bounds, ext);
  dst.iteration_cap = 1u << 26;
  bool rhs = eval_hyperqptl_plus(extend_alphabet(model, ext), out, dst);
  CHECK(lhs == rhs);
}

TEST_CASE("lemma 4 translation dual-evaluates on a tiny instance") {
  Formula phi = parse_formula("existsP q . exists pi . q[pi]", Logic::HyperQPTLPlus);
  Formula out = hqptlplus_to_h2l(phi);
  CHECK(out.logic() == Logic::Hyper2LTL);
  CHECK(check_sentence(out));
  CHECK(out == hqptlplus_to_h2l_nested(phi));  // nested form is the deliverable

  Alphabet ap({"p", "q"});
  TraceSet model(ap, {mk(ap, {}, {{"p"}})});
  UniverseParams bounds(1, 1);
  EvalParams ep(bounds, ap);
  ep.iteration_cap = 1u << 26;
  CHECK(eval_hyperqptl_plus(model, phi, ep) == eval_hyper2ltl(model, out, ep));
}

TEST_CASE("two set variables suffice: live-variable analysis") {
  Formula one = parse_formula("existsP q . exists pi . q[pi]", Logic::HyperQPTLPlus);
  CHECK(max_live_set_vars(hqptlplus_to_h2l_nested(one)) <= 2);
  Formula two = parse_formula(
      "existsP q . forallP u . exists pi . (q[pi] | u[pi])", Logic::HyperQPTLPlus);
  CHECK(max_live_set_vars(hqptlplus_to_h2l_nested(two)) <= 2);
  Formula three = parse_formula(
      "existsP q . forallP u . existsP w . exists pi . (q[pi] | u[pi] | w[pi])",
      Logic::HyperQPTLPlus);
  CHECK(max_live_set_vars(hqptlplus_to_h2l_nested(three)) <= 2);
}
