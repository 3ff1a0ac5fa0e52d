#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "zdgame/errors.hpp"
#include "zdgame/game_core.hpp"
#include "zdgame/numeric.hpp"
#include "zdgame/rng.hpp"
#include "zdgame/state_space.hpp"

using namespace zdgame;

TEST_CASE("state order is lexicographic with access first") {
  StateSpace s(2);
  REQUIRE(s.size() == 4);
  CHECK(s.index_of(std::vector<int>{1, 1}) == 0);
  CHECK(s.index_of(std::vector<int>{1, 2}) == 1);
  CHECK(s.index_of(std::vector<int>{2, 1}) == 2);
  CHECK(s.index_of(std::vector<int>{2, 2}) == 3);
  CHECK(s.action_of(1, 0) == 1);
  CHECK(s.action_of(1, 1) == 2);
}

TEST_CASE("index round-trips through action tuples") {
  for (int n : {1, 2, 3, 4, 5}) {
    StateSpace s(n);
    for (std::size_t k = 0; k < s.size(); ++k) {
      auto actions = s.actions_of(k);
      CHECK(s.index_of(actions) == k);
      for (int i = 0; i < n; ++i) CHECK(actions[i] == s.action_of(k, i));
    }
  }
}

TEST_CASE("players index strategies by their own view") {
  StateSpace s(2);
  // Global state (1,2): player 1 sees (1,2); player 2 sees its own action
  // first, so it consults (2,1).
  const std::size_t state_12 = s.index_of(std::vector<int>{1, 2});
  CHECK(s.view_of(state_12, 0) == s.index_of(std::vector<int>{1, 2}));
  CHECK(s.view_of(state_12, 1) == s.index_of(std::vector<int>{2, 1}));
  // Three players, state (2,1,1): player 3 sees (1, 2,1).
  StateSpace t(3);
  const std::size_t state_211 = t.index_of(std::vector<int>{2, 1, 1});
  CHECK(t.view_of(state_211, 2) == t.index_of(std::vector<int>{1, 2, 1}));
}

TEST_CASE("view mapping is a bijection and global_of_view inverts it") {
  for (int n : {2, 3, 4}) {
    StateSpace s(n);
    for (int player = 0; player < n; ++player) {
      std::vector<bool> seen(s.size(), false);
      for (std::size_t k = 0; k < s.size(); ++k) {
        const std::size_t v = s.view_of(k, player);
        REQUIRE(v < s.size());
        CHECK(!seen[v]);
        seen[v] = true;
        CHECK(s.global_of_view(v, player) == k);
      }
    }
  }
}

TEST_CASE("players outside 1..20 are rejected") {
  CHECK_THROWS_AS(StateSpace(0), InvalidInput);
  CHECK_THROWS_AS(StateSpace(21), InvalidInput);
}

TEST_CASE("strategy probabilities are validated per mode") {
  StateSpace s(2);
  SUBCASE("exact values must be inside [0,1]") {
    CHECK_THROWS_AS(
        make_strategy<Rational>(0, {Rational(2), Rational(0), Rational(0), Rational(0)}, s),
        InvalidInput);
    auto ok = make_strategy<Rational>(0, {Rational(1), Rational(0), Rational(1, 2), Rational(1)}, s);
    CHECK(ok.probs[2] == Rational(1, 2));
  }
  SUBCASE("float values clamp within slack and reject beyond") {
    auto near = make_strategy<double>(0, {1.0 + 1e-13, -1e-13, 0.5, 0.5}, s);
    CHECK(near.probs[0] == 1.0);
    CHECK(near.probs[1] == 0.0);
    CHECK_THROWS_AS(make_strategy<double>(0, {1.1, 0, 0, 0}, s), InvalidInput);
  }
  SUBCASE("owner and length are checked") {
    CHECK_THROWS_AS(make_strategy<double>(2, {0.5, 0.5, 0.5, 0.5}, s), InvalidInput);
    CHECK_THROWS_AS(make_strategy<double>(0, {0.5, 0.5}, s), InvalidInput);
  }
}

TEST_CASE("two provider game fills the four joint states") {
  auto g = make_two_provider_game<Rational>(Rational(1), Rational(2), Rational(1, 2),
                                            Rational(1, 3));
  REQUIRE(g.num_players() == 2);
  CHECK(g.payoff_vector(0) == std::vector<Rational>{Rational(1, 2), Rational(1), Rational(0), Rational(0)});
  CHECK(g.payoff_vector(1) == std::vector<Rational>{Rational(2, 3), Rational(0), Rational(2), Rational(0)});
}

TEST_CASE("three provider payoffs depend on the accessor count") {
  std::vector<Rational> r{Rational(1), Rational(1), Rational(1)};
  std::vector<Rational> a1{Rational(1, 2), Rational(1, 2), Rational(1, 2)};
  std::vector<Rational> a2{Rational(1, 3), Rational(1, 3), Rational(1, 3)};
  auto g = make_three_provider_game(r, a1, a2);
  StateSpace s(3);
  for (std::size_t k = 0; k < s.size(); ++k) {
    int accessors = 0;
    for (int i = 0; i < 3; ++i)
      if (s.action_of(k, i) == 1) ++accessors;
    for (int i = 0; i < 3; ++i) {
      const Rational w = g.payoff_vector(i)[k];
      if (s.action_of(k, i) == 2) {
        CHECK(w == Rational(0));
      } else if (accessors == 1) {
        CHECK(w == Rational(1));
      } else if (accessors == 2) {
        CHECK(w == Rational(1, 2));
      } else {
        CHECK(w == Rational(1, 3));
      }
    }
  }
}

TEST_CASE("payoff validation rejects wrong shapes and non-finite floats") {
  StateSpace s(2);
  PayoffMatrix<double> g;
  g.per_player = {{1, 2, 3, 4}};
  CHECK_THROWS_AS(validate_payoffs(g, s), InvalidInput);
  g.per_player = {{1, 2, 3, 4}, {1, 2, 3}};
  CHECK_THROWS_AS(validate_payoffs(g, s), InvalidInput);
  g.per_player = {{1, 2, 3, 4}, {1, 2, 3, 1.0 / 0.0}};
  CHECK_THROWS_AS(validate_payoffs(g, s), InvalidInput);
  g.per_player = {{1, 2, 3, 4}, {1, 2, 3, 4}};
  CHECK_NOTHROW(validate_payoffs(g, s));
}

TEST_CASE("rational parsing accepts integers, decimals and fractions") {
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("2/3") == Rational(2, 3));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("-4/6") == Rational(-2, 3));
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidInput);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidInput);
  CHECK_THROWS_AS(parse_rational(""), InvalidInput);
  CHECK_THROWS_AS(parse_rational("1.2.3"), InvalidInput);
}

TEST_CASE("real parsing accepts fraction syntax too") {
  CHECK(parse_real("0.5") == 0.5);
  CHECK(parse_real("2/3") == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(parse_real("12x"), InvalidInput);
}

TEST_CASE("number formatting round-trips") {
  CHECK(rational_to_string(Rational(2, 3)) == "2/3");
  CHECK(rational_to_string(Rational(-5)) == "-5");
  CHECK(parse_rational(rational_to_string(Rational(22, 7))) == Rational(22, 7));
  const double x = 0.1 + 0.2;
  CHECK(parse_real(format_real_roundtrip(x)) == x);
  CHECK(format_real(0.5) == "0.5");
}

namespace {

// Reference splitmix64 finalizer, written out independently.
std::uint64_t ref_fin(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("counter rng matches the chained splitmix64 reference") {
  const std::uint64_t g = 0x9e3779b97f4a7c15ULL;
  CounterRng rng{7};
  const std::uint64_t expect =
      ref_fin(ref_fin(ref_fin(7 + g * 3) + g * 5) + g * 9);
  CHECK(rng.word(2, 4, 8) == expect);
}

TEST_CASE("counter rng draws do not depend on evaluation order") {
  CounterRng rng{123};
  std::vector<double> forward, backward;
  for (int i = 0; i < 50; ++i) forward.push_back(rng.uniform(1, 2, i));
  for (int i = 49; i >= 0; --i) backward.push_back(rng.uniform(1, 2, i));
  for (int i = 0; i < 50; ++i) CHECK(forward[i] == backward[49 - i]);
}

TEST_CASE("counter rng uniforms live in [0,1) and differ across streams") {
  CounterRng rng{99};
  int distinct = 0;
  for (int r = 0; r < 100; ++r) {
    const double a = rng.uniform(0, 0, r);
    const double b = rng.uniform(1, 0, r);
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
    if (a != b) ++distinct;
  }
  CHECK(distinct > 90);
  CounterRng other{100};
  CHECK(rng.uniform(0, 0, 0) != other.uniform(0, 0, 0));
}
