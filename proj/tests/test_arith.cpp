// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hyperq/arith.hpp"
#include "hyperq/syntax.hpp"

using namespace hyperq;

TEST_CASE("cantor pairing closed form") {
  CHECK(cantor_pair(0, 0) == 0);
  // direct evaluation of (i+j)(i+j+1)/2 + j
  CHECK(cantor_pair(1, 2) == 8);
  CHECK(cantor_pair(2, 1) == 7);  // asymmetric
  CHECK(cantor_pair(0, 1) == 2);
  CHECK(cantor_pair(1, 0) == 1);
}

TEST_CASE("cantor unpair inverts pair") {
  CHECK(cantor_unpair(0) == std::pair<std::uint64_t, std::uint64_t>{0, 0});
  CHECK(cantor_unpair(8) == std::pair<std::uint64_t, std::uint64_t>{1, 2});
  for (std::uint64_t n = 0; n < 4096; ++n) {
    auto [i, j] = cantor_unpair(n);
    CHECK(cantor_pair(i, j) == n);
  }
  for (std::uint64_t i = 0; i < 64; ++i) {
    for (std::uint64_t j = 0; j < 64; ++j) {
      auto [a, b] = cantor_unpair(cantor_pair(i, j));
      CHECK(a == i);
      CHECK(b == j);
    }
  }
}

TEST_CASE("pairing is monotone along diagonals") {
  for (std::uint64_t s1 = 0; s1 < 40; ++s1) {
    for (std::uint64_t s2 = s1 + 1; s2 < 40; ++s2) {
      for (std::uint64_t j1 = 0; j1 <= s1; ++j1) {
        for (std::uint64_t j2 = 0; j2 <= s2; ++j2) {
          CHECK(cantor_pair(s1 - j1, j1) < cantor_pair(s2 - j2, j2));
        }
      }
    }
  }
}

TEST_CASE("trace encoding") {
  Alphabet ap({"p"});
  std::map<std::string, std::uint64_t> index = {{"p", 0}};
  LassoTrace never(ap, {}, {0});
  CHECK(encode_trace(never, index, 6).values.empty());

  LassoTrace always_p(ap, {}, {make_letter(ap, {"p"})});
  EncodedTrace e = encode_trace(always_p, index, 2);
  // pair(0,0) = 0 and pair(1,0) = 1 by the closed form
  CHECK(e.values == std::set<std::uint64_t>{0, 1});

  auto decoded = decode_trace(e, index, 2);
  REQUIRE(decoded.size() == 2);
  CHECK(decoded[0].count("p") == 1);
  CHECK(decoded[1].count("p") == 1);

  std::map<std::string, std::uint64_t> dup = {{"p", 0}, {"q", 0}};
  CHECK_THROWS_AS(encode_trace(always_p, dup, 2), Error);
}

TEST_CASE("eval_arith examples") {
  ArithAssignment empty;
  BoundedDomain n8(8);
  // exists1 y . y + y = z with z |-> 4
  ArithAssignment z4;
  z4.first["z"] = 4;
  CHECK(eval_arith(parse_arith("exists1 y . y + y = z"), n8, z4));
  ArithAssignment z7;
  z7.first["z"] = 7;
  CHECK_FALSE(eval_arith(parse_arith("exists1 y . y + y = z"), n8, z7));

  CHECK_FALSE(eval_arith(parse_arith("exists1 y . y < y"), n8, empty));
  CHECK(eval_arith(parse_arith("forall1 y . !(y < y)"), n8, empty));

  BoundedDomain n2(2);
  CHECK(eval_arith(parse_arith("exists3 YY . exists2 Y . Y in YY"), n2, empty));
  CHECK_FALSE(eval_arith(parse_arith("forall3 YY . exists2 Y . Y in YY"), n2, empty));

  // exact integer atoms: no wrap-around near the bound
  CHECK_FALSE(eval_arith(parse_arith("exists1 y . exists1 z . y + z = w & w < y"),
                         n8, [] {
                           ArithAssignment a;
                           a.first["w"] = 3;
                           return a;
                         }()));
}

TEST_CASE("negation duality at every order") {
  BoundedDomain n3(3);
  ArithAssignment empty;
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"forall1 y . y < z", "!(exists1 y . !(y < z))"},
      {"forall2 Y . y in Y", "!(exists2 Y . !(y in Y))"},
      {"forall3 YY . Y in YY", "!(exists3 YY . !(Y in YY))"},
  };
  ArithAssignment a;
  a.first["y"] = 1;
  a.first["z"] = 2;
  a.second["Y"] = 0b101;
  for (const auto& [left, right] : pairs) {
    CHECK(eval_arith(parse_arith(left), n3, a) ==
          eval_arith(parse_arith(right), n3, a));
  }
}

TEST_CASE("third-order enumeration guard") {
  ArithAssignment empty;
  BoundedDomain n5(5);
  CHECK_THROWS_AS(
      eval_arith(parse_arith("exists3 YY . exists2 Y . Y in YY"), n5, empty),
      CapError);
  BoundedDomain n5_force(5, true);
  CHECK(eval_arith(parse_arith("exists3 YY . exists2 Y . Y in YY"), n5_force, empty));
}

TEST_CASE("theta_eq_n has a unique satisfying value") {
  for (std::uint64_t n : {0ULL, 1ULL, 2ULL, 3ULL, 5ULL, 6ULL, 11ULL}) {
    ArithFormula theta = build_theta_eq_n(n);
    BoundedDomain dom(16);
    int hits = 0;
    for (std::uint64_t x = 0; x < 16; ++x) {
      ArithAssignment a;
      a.first["x"] = x;
      if (eval_arith(theta, dom, a)) {
        ++hits;
        CHECK(x == n);
      }
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("theta_eq_n is logarithmic in size") {
  std::size_t six = arith_node_count(build_theta_eq_n(6));
  CHECK(six <= 40);  // a handful of nodes per binary digit
  std::size_t big = arith_node_count(build_theta_eq_n(1024));
  std::size_t bigger = arith_node_count(build_theta_eq_n(2048));
  CHECK(bigger <= big + 12);  // one doubling step adds constant nodes
}

TEST_CASE("sigma21 shape recognition") {
  CHECK(is_sigma21(parse_arith("exists3 YY . exists2 Y . Y in YY")));
  CHECK(is_sigma21(parse_arith("exists1 y . y < y")));
  CHECK_FALSE(is_sigma21(parse_arith("forall3 YY . exists2 Y . Y in YY")));
  CHECK_FALSE(is_sigma21(parse_arith("exists3 YY . forall3 ZZ . exists2 Y . Y in YY & Y in ZZ")));
  CHECK(arith_has_third_order(parse_arith("exists3 YY . exists2 Y . Y in YY")));
  CHECK_FALSE(arith_has_third_order(parse_arith("exists1 y . y < y")));
}

TEST_CASE("rename_apart_arith") {
  ArithFormula twice = parse_arith("(exists1 y . y < z) & (exists1 y . z < y)");
  ArithFormula renamed = rename_apart_arith(twice);
  ArithFormula expected =
      a_and(a_exists(1, "y", a_less("y", "z")), a_exists(1, "y1", a_less("z", "y1")));
  CHECK(renamed == expected);
}
