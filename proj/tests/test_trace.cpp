// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>
#include <set>

#include "hyperq/io.hpp"
#include "hyperq/trace.hpp"

using namespace hyperq;

namespace {

LassoTrace mk(const Alphabet& ap, const std::vector<std::vector<std::string>>& stem,
              const std::vector<std::vector<std::string>>& loop) {
  std::vector<Letter> s, l;
  for (const auto& letter : stem) s.push_back(make_letter(ap, letter));
  for (const auto& letter : loop) l.push_back(make_letter(ap, letter));
  return LassoTrace(ap, std::move(s), std::move(l));
}

LassoTrace random_trace(const Alphabet& ap, std::mt19937_64& rng, std::size_t max_stem,
                        std::size_t max_loop) {
  std::uniform_int_distribution<std::size_t> stem_len(0, max_stem);
  std::uniform_int_distribution<std::size_t> loop_len(1, max_loop);
  std::uniform_int_distribution<Letter> letter(0, (Letter(1) << ap.size()) - 1);
  std::vector<Letter> s, l;
  std::size_t sn = stem_len(rng), ln = loop_len(rng);
  for (std::size_t i = 0; i < sn; ++i) s.push_back(letter(rng));
  for (std::size_t i = 0; i < ln; ++i) l.push_back(letter(rng));
  return LassoTrace(ap, std::move(s), std::move(l));
}

}  // namespace

TEST_CASE("canonical form agrees with raw unrolling") {
  Alphabet ap({"p", "q"});
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Letter> letter(0, 3);
  for (int round = 0; round < 500; ++round) {
    std::uniform_int_distribution<std::size_t> stem_len(0, 4);
    std::uniform_int_distribution<std::size_t> loop_len(1, 4);
    std::size_t sn = stem_len(rng), ln = loop_len(rng);
    std::vector<Letter> s, l;
    for (std::size_t i = 0; i < sn; ++i) s.push_back(letter(rng));
    for (std::size_t i = 0; i < ln; ++i) l.push_back(letter(rng));
    std::vector<Letter> raw;  // positionwise oracle before canonicalization
    for (std::size_t i = 0; i < sn + 3 * ln + 4; ++i) {
      raw.push_back(i < sn ? s[i] : l[(i - sn) % ln]);
    }
    LassoTrace t(ap, s, l);
    REQUIRE(t.stem_size() <= sn);
    REQUIRE(t.loop_size() <= ln);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      CAPTURE(round);
      CAPTURE(i);
      REQUIRE(t.at(i) == raw[i]);
    }
  }
}

TEST_CASE("canonical form is minimal and identical across representations") {
  Alphabet ap({"p"});
  LassoTrace a = mk(ap, {{"p"}, {"p"}, {"p"}}, {{"p"}});
  LassoTrace b = mk(ap, {}, {{"p"}});
  CHECK(a == b);
  CHECK(a.stem_size() == 0);
  CHECK(a.loop_size() == 1);
  LassoTrace c = mk(ap, {}, {{"p"}, {"p"}});
  CHECK(c.loop_size() == 1);
  LassoTrace d = mk(ap, {{}}, {{"p"}, {}});
  LassoTrace e = mk(ap, {}, {{}, {"p"}});
  CHECK(d == e);
}

TEST_CASE("projection examples") {
  Alphabet ap({"p", "q"});
  Alphabet sub({"p"});
  LassoTrace t = mk(ap, {{"p", "q"}}, {{"q"}});
  LassoTrace pr = projection(t, sub);
  CHECK(pr.at(0) == make_letter(sub, {"p"}));
  CHECK(pr.at(1) == make_letter(sub, {}));

  CHECK(projection(t, ap) == t);

  Alphabet empty{std::vector<std::string>{}};
  LassoTrace pe = projection(t, empty);
  CHECK(pe == LassoTrace(empty, {}, {0}));
  CHECK_THROWS_AS(projection(pr, ap), AlphabetError);
}

TEST_CASE("pointwise union examples") {
  Alphabet app({"p"});
  Alphabet apq({"q"});
  LassoTrace tp = mk(app, {}, {{"p"}});
  LassoTrace tq = mk(apq, {}, {{"q"}});
  LassoTrace u = pointwise_union(tp, tq);
  Alphabet both({"p", "q"});
  CHECK(u == mk(both, {}, {{"p", "q"}}));

  Alphabet empty{std::vector<std::string>{}};
  LassoTrace te(empty, {}, {0});
  CHECK(pointwise_union(tp, te) == tp);

  CHECK_THROWS_AS(pointwise_union(tp, tp), AlphabetError);
}

TEST_CASE("pointwise union positionwise to horizon 20") {
  Alphabet app({"p"});
  Alphabet apq({"q"});
  std::mt19937_64 rng(13);
  for (int round = 0; round < 200; ++round) {
    LassoTrace tp = random_trace(app, rng, 1, 2);
    LassoTrace tq = random_trace(apq, rng, 2, 3);
    LassoTrace u = pointwise_union(tp, tq);
    for (std::size_t i = 0; i < 20; ++i) {
      CHECK(u.has(i, "p") == tp.has(i, "p"));
      CHECK(u.has(i, "q") == tq.has(i, "q"));
    }
    CHECK(std::lcm(tp.loop_size(), tq.loop_size()) % u.loop_size() == 0);
  }
}

TEST_CASE("union then projection is the identity on the left factor") {
  Alphabet app({"p"});
  Alphabet apq({"q", "r"});
  std::mt19937_64 rng(17);
  for (int round = 0; round < 200; ++round) {
    LassoTrace tp = random_trace(app, rng, 3, 3);
    LassoTrace tq = random_trace(apq, rng, 3, 3);
    CHECK(projection(pointwise_union(tp, tq), app) == tp);
  }
}

TEST_CASE("equal_modulo") {
  Alphabet ap({"p", "q"});
  TraceSet a(ap, {mk(ap, {}, {{"p"}}), mk(ap, {}, {{"p", "q"}})});
  TraceSet b(ap, {mk(ap, {}, {{"p"}})});
  CHECK(equal_modulo(a, a, ap));
  Alphabet sub({"p"});
  CHECK(equal_modulo(a, b, sub));
  CHECK_FALSE(equal_modulo(a, b, ap));
  TraceSet c(ap, {mk(ap, {}, {{}})});
  CHECK_FALSE(equal_modulo(b, c, sub));
}

TEST_CASE("override_prop") {
  Alphabet ap({"p", "q"});
  TraceSet t(ap, {mk(ap, {}, {{"p"}}), mk(ap, {}, {{"p", "q"}})});
  Alphabet qap({"q"});
  LassoTrace always_q(qap, {}, {make_letter(qap, {"q"})});
  TraceSet t2 = override_prop(t, "q", always_q);
  CHECK(t2.size() == 1);  // members identical off q collapse
  CHECK(t2.members()[0].has(0, "q"));
  CHECK(t2.members()[0].has(5, "q"));
  CHECK(t2.members()[0].has(0, "p"));

  LassoTrace never_q(qap, {}, {0});
  TraceSet t3 = override_prop(t, "q", never_q);
  CHECK(t3.size() == 1);
  CHECK_FALSE(t3.members()[0].has(3, "q"));

  Alphabet rest({"p"});
  CHECK(equal_modulo(t, t2, rest));
  CHECK_THROWS_AS(override_prop(t, "r", never_q), AlphabetError);
}

TEST_CASE("override_prop keeps the off-q projection on random sets") {
  Alphabet ap({"p", "q"});
  Alphabet qap({"q"});
  Alphabet rest({"p"});
  std::mt19937_64 rng(23);
  for (int round = 0; round < 100; ++round) {
    std::vector<LassoTrace> members;
    std::uniform_int_distribution<int> count(1, 4);
    int c = count(rng);
    for (int i = 0; i < c; ++i) members.push_back(random_trace(ap, rng, 2, 2));
    TraceSet t(ap, std::move(members));
    LassoTrace row = random_trace(qap, rng, 2, 2);
    TraceSet t2 = override_prop(t, "q", row);
    CHECK(equal_modulo(t, t2, rest));
    for (const auto& m : t2.members()) {
      CHECK(projection(m, qap) == row);
    }
  }
}

TEST_CASE("enumerate_universe counts") {
  Alphabet x({"x"});
  CHECK(enumerate_universe(x, UniverseParams(0, 1)).size() == 2);
  CHECK(enumerate_universe(x, UniverseParams(1, 1)).size() == 4);
  Alphabet empty{std::vector<std::string>{}};
  CHECK(enumerate_universe(empty, UniverseParams(2, 2)).size() == 1);
  CHECK_THROWS_AS(enumerate_universe(x, UniverseParams(1, 1), 3), CapError);
}

TEST_CASE("enumerate_universe matches brute canonicalization") {
  Alphabet ap({"p", "q"});
  UniverseParams params(1, 2);
  TraceSet u = enumerate_universe(ap, params);
  std::set<LassoTrace> expected;
  for (std::size_t sn = 0; sn <= 1; ++sn) {
    for (std::size_t ln = 1; ln <= 2; ++ln) {
      std::vector<Letter> word(sn + ln, 0);
      while (true) {
        expected.insert(LassoTrace(ap,
                                   std::vector<Letter>(word.begin(), word.begin() + sn),
                                   std::vector<Letter>(word.begin() + sn, word.end())));
        std::size_t k = word.size();
        while (k > 0) {
          if (++word[k - 1] < 4) break;
          word[k - 1] = 0;
          --k;
        }
        if (k == 0) break;
      }
    }
  }
  CHECK(u.size() == expected.size());
  for (const auto& t : u.members()) CHECK(expected.count(t) == 1);
}

TEST_CASE("traces_of_system") {
  Alphabet ap({"p"});
  SUBCASE("self loop") {
    TransitionSystem ts(ap, {"A"}, {{"A", "A"}}, {"A"}, {{"A", {"p"}}});
    TraceSet t = traces_of_system(ts, UniverseParams(0, 1));
    REQUIRE(t.size() == 1);
    CHECK(t.members()[0] == mk(ap, {}, {{"p"}}));
  }
  SUBCASE("two-cycle") {
    TransitionSystem ts(ap, {"A", "B"}, {{"A", "B"}, {"B", "A"}}, {"A"},
                        {{"A", {"p"}}, {"B", {}}});
    TraceSet t = traces_of_system(ts, UniverseParams(0, 2));
    REQUIRE(t.size() == 1);
    CHECK(t.members()[0] == mk(ap, {}, {{"p"}, {}}));
  }
  SUBCASE("unreachable vertex label never appears") {
    Alphabet ap2({"p", "z"});
    TransitionSystem ts(ap2, {"A", "Z"}, {{"A", "A"}, {"Z", "Z"}}, {"A"},
                        {{"A", {"p"}}, {"Z", {"z"}}});
    TraceSet t = traces_of_system(ts, UniverseParams(3, 3));
    for (const auto& m : t.members()) {
      for (std::size_t i = 0; i < 10; ++i) CHECK_FALSE(m.has(i, "z"));
    }
  }
  SUBCASE("monotone in the bounds") {
    TransitionSystem ts(ap, {"A", "B"}, {{"A", "B"}, {"B", "A"}, {"A", "A"}}, {"A"},
                        {{"A", {"p"}}, {"B", {}}});
    TraceSet small = traces_of_system(ts, UniverseParams(1, 2));
    TraceSet big = traces_of_system(ts, UniverseParams(2, 3));
    for (const auto& m : small.members()) CHECK(big.contains(m));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(TransitionSystem(ap, {"A"}, {}, {"A"}, {{"A", {"p"}}}), Error);
    CHECK_THROWS_AS(TransitionSystem(ap, {"A"}, {{"A", "A"}}, {}, {{"A", {"p"}}}),
                    Error);
  }
}

TEST_CASE("json round trip") {
  std::string text = R"({"ap": ["p","q"],
    "traces": [{"stem": [["p","q"],[]], "loop": [["p"]]}]})";
  TraceSet t = trace_set_from_json_text(text);
  CHECK(t.alphabet() == Alphabet({"p", "q"}));
  REQUIRE(t.size() == 1);
  CHECK(t.members()[0].has(0, "p"));
  CHECK(t.members()[0].has(0, "q"));
  CHECK_FALSE(t.members()[0].has(1, "p"));
  CHECK(t.members()[0].has(2, "p"));
  TraceSet again = trace_set_from_json_text(trace_set_to_json_text(t));
  CHECK(again == t);

  std::string sys = R"({"ap": ["p"], "vertices": ["A","B"],
    "edges": [["A","B"],["B","A"]], "initial": ["A"],
    "labels": {"A": ["p"], "B": []}})";
  TransitionSystem ts = system_from_json_text(sys);
  CHECK(ts.vertices().size() == 2);
  CHECK(ts.label("A") == make_letter(ts.alphabet(), {"p"}));
}
