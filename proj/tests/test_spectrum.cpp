#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zdgame/errors.hpp"
#include "zdgame/file_formats.hpp"
#include "zdgame/spectrum.hpp"

using namespace zdgame;

namespace {

// Two users whose gain-normalized noise floors are 1 W and 2 W under a 2 W
// cap, so every quantity below has a short closed form.
SpectrumProvider two_user_provider() {
  SpectrumProvider p;
  p.budget = 2.0;
  p.users = {{0.5, 0.5, {}}, {1.0, 0.5, {}}};
  return p;
}

DownlinkScenario symmetric_pair() {
  DownlinkScenario sc;
  sc.bandwidth = 1.0;
  for (int i = 0; i < 2; ++i) {
    SpectrumProvider p;
    p.budget = 1.0;
    p.users = {{0.5, 0.5, {0.5}}};
    sc.providers.push_back(p);
  }
  return sc;
}

std::string error_text(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("scenario validation points at the offending field") {
  auto base = symmetric_pair();

  auto bad = base;
  bad.providers[0].users[0].gain = 1.5;
  CHECK(error_text([&] { validate_scenario(bad); }) ==
        "provider 1, user 1: path gain must be in (0,1]");

  bad = base;
  bad.providers[1].users[0].noise = 0.0;
  CHECK(error_text([&] { validate_scenario(bad); }) ==
        "provider 2, user 1: noise power must be positive");

  bad = base;
  bad.providers[0].budget = -1.0;
  CHECK_THROWS_AS(validate_scenario(bad), InvalidInput);

  bad = base;
  bad.providers[0].users[0].cross_gains = {0.1, 0.2};
  CHECK(error_text([&] { validate_scenario(bad); }).find("one cross gain per") !=
        std::string::npos);

  bad = base;
  bad.providers.pop_back();
  CHECK(error_text([&] { validate_scenario(bad); }).find("2 or 3 providers") !=
        std::string::npos);

  bad = base;
  bad.bandwidth = 0.0;
  CHECK_THROWS_AS(validate_scenario(bad), InvalidInput);

  bad = base;
  bad.providers[0].pricing = PricingSpec{"iso", 1.0, 1.0};
  CHECK(error_text([&] { validate_scenario(bad); }).find("in (0,1)") !=
        std::string::npos);

  bad = base;
  bad.providers[0].pricing = PricingSpec{"sqrt", 0.5, 1.0};
  CHECK_THROWS_AS(validate_scenario(bad), InvalidInput);

  CHECK_NOTHROW(validate_scenario(base));
}

TEST_CASE("per-user SINR counts leftover cap as self-interference") {
  SpectrumProvider p;
  p.budget = 2.0;
  p.users = {{0.5, 0.5, {0.3}}};
  // lambda=1: 0.5*1 / (0.5 + 0.5*(2-1) + 0.3*1) = 0.5/1.3
  CHECK(std::abs(user_sinr(p, 0, 1.0, {1.0}) - 5.0 / 13.0) <= 1e-15);
  // Full cap: no self-interference term left.
  CHECK(std::abs(user_sinr(p, 0, 2.0, {1.0}) - 1.0 / 0.8) <= 1e-15);
  // No power, no signal.
  CHECK(user_sinr(p, 0, 0.0, {1.0}) == 0.0);
  CHECK_THROWS_AS(user_sinr(p, 0, 2.5, {1.0}), InvalidInput);
  CHECK_THROWS_AS(user_sinr(p, 0, 1.0, {}), InvalidInput);
  CHECK_THROWS_AS(user_sinr(p, 1, 1.0, {1.0}), InvalidInput);
}

TEST_CASE("max-min split of the two-user provider has the closed form") {
  auto p = two_user_provider();
  auto alloc = maxmin_solo(p);
  // floors 1 and 2, cap 2: K = 2/(3 + 2*2) = 2/7.
  CHECK(std::abs(alloc.k_factor - 2.0 / 7.0) <= 1e-15);
  CHECK(std::abs(alloc.lambda[0] - 6.0 / 7.0) <= 1e-15);
  CHECK(std::abs(alloc.lambda[1] - 8.0 / 7.0) <= 1e-15);
  CHECK(std::abs(alloc.sinr - 0.4) <= 1e-15);
}

TEST_CASE("max-min allocation equalizes SINRs and spends the whole cap") {
  std::mt19937_64 gen(1234);
  for (int rep = 0; rep < 30; ++rep) {
    auto sc = oracle::random_scenario(gen);
    for (std::size_t i = 0; i < sc.providers.size(); ++i) {
      const auto& p = sc.providers[i];
      std::vector<double> budgets;
      for (std::size_t j = 0; j < sc.providers.size(); ++j)
        if (j != i) budgets.push_back(sc.providers[j].budget);
      auto alloc = maxmin_allocation(p, budgets);
      double spent = 0.0;
      for (std::size_t k = 0; k < p.users.size(); ++k) {
        spent += alloc.lambda[k];
        CHECK(std::abs(user_sinr(p, k, alloc.lambda[k], budgets) - alloc.sinr) <=
              1e-12 * (1.0 + alloc.sinr));
      }
      CHECK(std::abs(spent - p.budget) <= 1e-12 * p.budget);
      CHECK(std::abs(alloc.sinr - alloc.k_factor / (1.0 - alloc.k_factor)) <=
            1e-12);
    }
  }
}

TEST_CASE("closed form agrees with the bisection oracle") {
  std::mt19937_64 gen(77);
  for (int rep = 0; rep < 12; ++rep) {
    auto sc = oracle::random_scenario(gen);
    const auto& p = sc.providers[0];
    std::vector<double> budgets;
    for (std::size_t j = 1; j < sc.providers.size(); ++j)
      budgets.push_back(sc.providers[j].budget);
    auto fast = maxmin_allocation(p, budgets);
    auto slow = oracle::equal_sinr_bisection(p, budgets);
    CHECK(std::abs(fast.sinr - slow.sinr) <= 1e-9 * (1.0 + slow.sinr));
    for (std::size_t k = 0; k < p.users.size(); ++k)
      CHECK(std::abs(fast.lambda[k] - slow.lambda[k]) <= 1e-9 * p.budget);
  }
}

TEST_CASE("no unequal split beats the equalized SINR") {
  std::mt19937_64 gen(99);
  for (int rep = 0; rep < 8; ++rep) {
    auto sc = oracle::random_scenario(gen, 2);
    const auto& p = sc.providers[0];
    if (p.users.size() != 2) continue;
    std::vector<double> budgets;
    for (std::size_t j = 1; j < sc.providers.size(); ++j)
      budgets.push_back(sc.providers[j].budget);
    const double brute = oracle::maxmin_grid_min_sinr(p, budgets);
    const double closed = maxmin_allocation(p, budgets).sinr;
    CHECK(std::abs(brute - closed) <= 1e-9 * (1.0 + closed));
  }
}

TEST_CASE("aggregate rate follows the Shannon formula") {
  CHECK(std::abs(shannon_rate(1e6, 2, 0.4) - 970853.654340) <= 1e-4);
  CHECK(shannon_rate(1e6, 2, 0.0) == 0.0);
}

TEST_CASE("the symmetric pair reduces to the known access game") {
  auto game = build_game(symmetric_pair());
  const double theta = 0.58496250072115619;  // log2(3)-1
  REQUIRE(game.params.theta.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(game.params.solo_rate[i] - 1.0) <= 1e-12);
    CHECK(std::abs(game.params.theta[i] - theta) <= 1e-9);
  }
  // Payoff matrix in state order 11,12,21,22.
  const auto& w1 = game.payoffs.per_player[0];
  const auto& w2 = game.payoffs.per_player[1];
  CHECK(std::abs(w1[0] - theta) <= 1e-9);
  CHECK(std::abs(w1[1] - 1.0) <= 1e-12);
  CHECK(w1[2] == 0.0);
  CHECK(w1[3] == 0.0);
  CHECK(std::abs(w2[0] - theta) <= 1e-9);
  CHECK(w2[1] == 0.0);
  CHECK(std::abs(w2[2] - 1.0) <= 1e-12);
  CHECK(w2[3] == 0.0);
  CHECK_FALSE(game.params.target_rate[0].has_value());
}

TEST_CASE("zero power cap makes the game degenerate, not malformed") {
  auto sc = symmetric_pair();
  sc.providers[1].budget = 0.0;
  CHECK_NOTHROW(validate_scenario(sc));
  CHECK_THROWS_AS(build_game(sc), Degenerate);
}

TEST_CASE("zero cross gain leaves a rate undiminished and is degenerate") {
  auto sc = symmetric_pair();
  sc.providers[0].users[0].cross_gains = {0.0};
  const std::string msg = error_text([&] { build_game(sc); });
  CHECK(msg.find("strictly shrink") != std::string::npos);
}

TEST_CASE("three providers get one- and two-interferer discounts") {
  DownlinkScenario sc;
  sc.bandwidth = 1.0;
  SpectrumProvider p0;
  p0.budget = 1.0;
  p0.users = {{0.5, 0.5, {0.2, 0.6}}};
  SpectrumProvider rest;
  rest.budget = 1.0;
  rest.users = {{0.5, 0.5, {0.3, 0.3}}};
  sc.providers = {p0, rest, rest};

  auto game = build_game(sc);
  // Provider 1 solo: floor 1, K = 1/2, SINR 1, rate log2(2) = 1.
  CHECK(std::abs(game.params.solo_rate[0] - 1.0) <= 1e-12);
  const double a = std::log2(1.0 + 1.0 / 1.4);  // interferer via gain 0.2
  const double b = std::log2(1.0 + 1.0 / 2.2);  // interferer via gain 0.6
  const double a2 = std::log2(1.0 + 1.0 / 2.6);
  CHECK(std::abs(game.params.alpha1[0] - (a + b) / 2.0) <= 1e-12);
  CHECK(std::abs(game.params.alpha2[0] - a2) <= 1e-12);
  CHECK_FALSE(game.params.alpha_symmetric);
  CHECK(game.params.theta.empty());

  // Per-state payoffs keep the exact rate, not the averaged discount: provider
  // 1 transmitting with only provider 2 (state 112) earns rate `a`.
  StateSpace space(3);
  const auto& w = game.payoffs.per_player[0];
  auto idx = [&](std::vector<int> actions) { return space.index_of(actions); };
  CHECK(std::abs(w[idx({1, 1, 2})] - a) <= 1e-12);
  CHECK(std::abs(w[idx({1, 2, 1})] - b) <= 1e-12);
  CHECK(std::abs(w[idx({1, 1, 1})] - a2) <= 1e-12);
  CHECK(std::abs(w[idx({1, 2, 2})] - 1.0) <= 1e-12);
  CHECK(w[idx({2, 1, 1})] == 0.0);

  // The symmetric co-providers agree between their two interferers.
  sc.providers[0] = rest;
  auto sym = build_game(sc);
  CHECK(sym.params.alpha_symmetric);
}

TEST_CASE("pricing targets maximize utility minus payment") {
  CHECK(std::abs(optimal_rate(log_utility(2.0), 1.0) - 1.0) <= 1e-6);
  CHECK(optimal_rate(log_utility(1.0), 1.0) == 0.0);
  CHECK(optimal_rate(log_utility(1.0), 5.0) == 0.0);
  CHECK(std::abs(optimal_rate(iso_elastic_utility(0.5), 2.0) - 0.25) <= 1e-5);

  CHECK_THROWS_AS(make_utility(PricingSpec{"sqrt", 0.5, 1.0}), InvalidInput);
  CHECK_THROWS_AS(log_utility(0.0), InvalidInput);
  CHECK_THROWS_AS(iso_elastic_utility(1.0), InvalidInput);
  CHECK_THROWS_AS(optimal_rate(log_utility(1.0), 0.0), InvalidInput);

  // Unbounded marginal utility has no finite optimum.
  const std::string no_opt =
      error_text([&] { optimal_rate([](double r) { return 2.0 * r * r + r; }, 1.0); });
  CHECK(no_opt.find("no finite optimum") != std::string::npos);

  // A convex kink must be caught, not silently bisected.
  auto kinked = [](double r) {
    if (r < 1.0) return 2.0 * r;
    if (r < 2.0) return 5.0 * r - 3.0;
    return 7.0;
  };
  const std::string msg = error_text([&] { optimal_rate(kinked, 1.0); });
  CHECK(msg.find("not concave") != std::string::npos);

  auto priced = symmetric_pair();
  priced.providers[0].pricing = PricingSpec{"log", 2.0, 1.0};
  auto game = build_game(priced);
  REQUIRE(game.params.target_rate[0].has_value());
  CHECK(std::abs(*game.params.target_rate[0] - 1.0) <= 1e-6);
  CHECK_FALSE(game.params.target_rate[1].has_value());
}

TEST_CASE("scenario JSON round-trips") {
  auto sc = symmetric_pair();
  sc.providers[0].pricing = PricingSpec{"iso", 0.5, 2.0};
  auto text = scenario_to_json_text(sc);
  auto back = scenario_from_json_text(text);
  CHECK(back.bandwidth == sc.bandwidth);
  REQUIRE(back.providers.size() == 2);
  CHECK(back.providers[0].budget == 1.0);
  CHECK(back.providers[0].users[0].noise == 0.5);
  CHECK(back.providers[0].users[0].cross_gains == std::vector<double>{0.5});
  REQUIRE(back.providers[0].pricing.has_value());
  CHECK(back.providers[0].pricing->utility == "iso");
  CHECK(back.providers[0].pricing->param == 0.5);
  CHECK_FALSE(back.providers[1].pricing.has_value());
}

TEST_CASE("scenario JSON errors name the path to the problem") {
  const std::string good = scenario_to_json_text(symmetric_pair());

  CHECK(error_text([&] { scenario_from_json_text("{oops"); })
            .find("malformed JSON") != std::string::npos);

  std::string no_units = good;
  no_units.replace(no_units.find("\"power\": \"W\""), 12, "\"power\": \"mW\"");
  CHECK(error_text([&] { scenario_from_json_text(no_units); })
            .find("units must declare") != std::string::npos);

  std::string bad_version = good;
  bad_version.replace(bad_version.find("\"schema_version\": 1"), 19,
                      "\"schema_version\": 9");
  CHECK(error_text([&] { scenario_from_json_text(bad_version); })
            .find("schema_version") != std::string::npos);

  std::string no_gain = good;
  no_gain.replace(no_gain.find("\"gain\""), 6, "\"gian\"");
  CHECK(error_text([&] { scenario_from_json_text(no_gain); }) ==
        "providers[0].users[0]: missing numeric field 'gain'");
}
