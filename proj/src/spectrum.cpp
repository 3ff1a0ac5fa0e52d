#include "zdgame/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zdgame/errors.hpp"
#include "zdgame/state_space.hpp"

namespace zdgame {

namespace {

void validate_provider(const SpectrumProvider& p, int index,
                       std::size_t n_providers) {
  const std::string who = "provider " + std::to_string(index + 1);
  if (!(p.budget >= 0.0) || !std::isfinite(p.budget))
    throw InvalidInput(who + ": power cap must be a nonnegative number");
  if (p.users.empty()) throw InvalidInput(who + ": needs at least one user");
  for (std::size_t k = 0; k < p.users.size(); ++k) {
    const SpectrumUser& u = p.users[k];
    const std::string where = who + ", user " + std::to_string(k + 1);
    if (!(u.noise > 0.0) || !std::isfinite(u.noise))
      throw InvalidInput(where + ": noise power must be positive");
    if (!(u.gain > 0.0) || !(u.gain <= 1.0))
      throw InvalidInput(where + ": path gain must be in (0,1]");
    if (u.cross_gains.size() != n_providers - 1)
      throw InvalidInput(where + ": needs one cross gain per other provider (" +
                         std::to_string(n_providers - 1) + ")");
    for (double g : u.cross_gains)
      if (!(g >= 0.0) || !(g <= 1.0))
        throw InvalidInput(where + ": cross gains must be in [0,1]");
  }
  if (p.pricing) {
    const PricingSpec& ps = *p.pricing;
    if (ps.utility != "log" && ps.utility != "iso")
      throw InvalidInput(who + ": utility must be \"log\" or \"iso\"");
    if (ps.utility == "log" && !(ps.param > 0.0))
      throw InvalidInput(who + ": log utility weight must be positive");
    if (ps.utility == "iso" && !(ps.param > 0.0 && ps.param < 1.0))
      throw InvalidInput(who + ": iso utility exponent must be in (0,1)");
    if (!(ps.price > 0.0) || !std::isfinite(ps.price))
      throw InvalidInput(who + ": price must be positive");
  }
}

}  // namespace

void validate_scenario(const DownlinkScenario& scenario) {
  if (!(scenario.bandwidth > 0.0) || !std::isfinite(scenario.bandwidth))
    throw InvalidInput("scenario: bandwidth must be positive");
  const std::size_t n = scenario.providers.size();
  if (n < 2 || n > 3)
    throw InvalidInput("scenario: needs 2 or 3 providers, got " +
                       std::to_string(n));
  for (std::size_t i = 0; i < n; ++i)
    validate_provider(scenario.providers[i], static_cast<int>(i), n);
}

double user_sinr(const SpectrumProvider& provider, std::size_t user,
                 double lambda, const std::vector<double>& interferer_budgets) {
  if (user >= provider.users.size())
    throw InvalidInput("user index out of range");
  if (!(lambda >= 0.0) || lambda > provider.budget * (1.0 + 1e-12))
    throw InvalidInput("per-user power must be within [0, cap]");
  const SpectrumUser& u = provider.users[user];
  if (interferer_budgets.size() != u.cross_gains.size())
    throw InvalidInput("need one interferer budget per cross gain");
  double denom = u.noise + u.gain * (provider.budget - lambda);
  for (std::size_t j = 0; j < u.cross_gains.size(); ++j) {
    if (!(interferer_budgets[j] >= 0.0))
      throw InvalidInput("interferer budgets must be nonnegative");
    denom += u.cross_gains[j] * interferer_budgets[j];
  }
  return lambda * u.gain / denom;
}

PowerAllocation maxmin_allocation(const SpectrumProvider& provider,
                                  const std::vector<double>& interferer_budgets) {
  if (provider.users.empty())
    throw InvalidInput("provider needs at least one user");
  const std::size_t n = provider.users.size();
  // Effective noise floor per user, normalized by its own gain.
  std::vector<double> floors(n);
  double floor_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const SpectrumUser& u = provider.users[k];
    if (interferer_budgets.size() != u.cross_gains.size())
      throw InvalidInput("need one interferer budget per cross gain");
    double interference = u.noise;
    for (std::size_t j = 0; j < u.cross_gains.size(); ++j)
      interference += u.cross_gains[j] * interferer_budgets[j];
    floors[k] = interference / u.gain;
    floor_sum += floors[k];
  }
  PowerAllocation out;
  out.k_factor =
      provider.budget / (floor_sum + static_cast<double>(n) * provider.budget);
  out.sinr = out.k_factor / (1.0 - out.k_factor);
  out.lambda.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    out.lambda[k] = out.k_factor * (floors[k] + provider.budget);
  return out;
}

PowerAllocation maxmin_solo(const SpectrumProvider& provider) {
  if (provider.users.empty())
    throw InvalidInput("provider needs at least one user");
  return maxmin_allocation(
      provider, std::vector<double>(provider.users[0].cross_gains.size(), 0.0));
}

double shannon_rate(double bandwidth, std::size_t n_users, double sinr) {
  return static_cast<double>(n_users) * bandwidth * std::log2(1.0 + sinr);
}

SpectrumGame build_game(const DownlinkScenario& scenario) {
  validate_scenario(scenario);
  const std::size_t n = scenario.providers.size();
  StateSpace space(static_cast<int>(n));
  SpectrumGame game;
  GameParameters& params = game.params;
  params.solo_rate.resize(n);
  params.target_rate.resize(n);

  // rate_with[i][mask]: provider i's aggregate rate when the other providers
  // in `mask` (bit order = cross_gains order) transmit at their caps.
  std::vector<std::vector<double>> rate_with(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SpectrumProvider& p = scenario.providers[i];
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    rate_with[i].resize(std::size_t{1} << others.size());
    for (std::size_t mask = 0; mask < rate_with[i].size(); ++mask) {
      std::vector<double> budgets(others.size(), 0.0);
      for (std::size_t j = 0; j < others.size(); ++j)
        if (mask & (std::size_t{1} << j))
          budgets[j] = scenario.providers[others[j]].budget;
      PowerAllocation alloc = maxmin_allocation(p, budgets);
      rate_with[i][mask] =
          shannon_rate(scenario.bandwidth, p.users.size(), alloc.sinr);
    }
    params.solo_rate[i] = rate_with[i][0];
    if (!(params.solo_rate[i] > 0.0))
      throw Degenerate("provider " + std::to_string(i + 1) +
                       " has zero solo rate (zero power cap); the access game "
                       "is degenerate");
    for (std::size_t mask = 1; mask < rate_with[i].size(); ++mask) {
      const double discount = rate_with[i][mask] / params.solo_rate[i];
      if (!(discount > 0.0) || !(discount < 1.0))
        throw Degenerate("provider " + std::to_string(i + 1) +
                         " sees interference discount " +
                         std::to_string(discount) +
                         "; simultaneous access must strictly shrink a "
                         "positive rate (is a cross gain or a cap zero?)");
    }
    if (p.pricing)
      params.target_rate[i] =
          optimal_rate(make_utility(*p.pricing), p.pricing->price);
  }

  if (n == 2) {
    params.theta = {rate_with[0][1] / params.solo_rate[0],
                    rate_with[1][1] / params.solo_rate[1]};
  } else {
    params.alpha1.resize(n);
    params.alpha2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = rate_with[i][1] / params.solo_rate[i];
      const double b = rate_with[i][2] / params.solo_rate[i];
      params.alpha1[i] = (a + b) / 2.0;
      params.alpha2[i] = rate_with[i][3] / params.solo_rate[i];
      if (std::fabs(a - b) > 1e-9) params.alpha_symmetric = false;
      if (!(params.alpha2[i] <= std::min(a, b)))
        throw Degenerate("provider " + std::to_string(i + 1) +
                         ": two interferers must hurt at least as much as one");
    }
  }

  game.payoffs.per_player.assign(n, std::vector<double>(space.size(), 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < space.size(); ++s) {
      if (space.action_of(s, static_cast<int>(i)) != 1) continue;
      std::size_t mask = 0, bit = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (space.action_of(s, static_cast<int>(j)) == 1)
          mask |= std::size_t{1} << bit;
        ++bit;
      }
      game.payoffs.per_player[i][s] = rate_with[i][mask];
    }
  }
  return game;
}

double optimal_rate(const std::function<double(double)>& utility, double price) {
  if (!(price > 0.0) || !std::isfinite(price))
    throw InvalidInput("price must be positive");
  if (!utility) throw InvalidInput("utility function required");
  std::vector<std::pair<double, double>> samples;
  auto slope = [&](double r) {
    const double h = 1e-7 * std::max(1.0, r);
    const double lo = std::max(0.0, r - h);
    const double s = (utility(r + h) - utility(lo)) / (r + h - lo) - price;
    if (!std::isfinite(s))
      throw InvalidInput("utility is not evaluable near R=" +
                         std::to_string(r));
    samples.emplace_back(r, s);
    return s;
  };
  auto check_concave = [&samples]() {
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const double slack = 1e-5 * (1.0 + std::fabs(samples[i - 1].second));
      if (samples[i].second > samples[i - 1].second + slack)
        throw InvalidInput("utility is not concave: marginal utility rises "
                           "between R=" + std::to_string(samples[i - 1].first) +
                           " and R=" + std::to_string(samples[i].first));
    }
  };
  if (slope(0.0) <= 0.0) {
    check_concave();
    return 0.0;
  }
  double lo = 0.0, hi = 1.0;
  while (slope(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15)
      throw InvalidInput(
          "marginal utility stays above the price; no finite optimum");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  check_concave();
  return 0.5 * (lo + hi);
}

std::function<double(double)> log_utility(double weight) {
  if (!(weight > 0.0)) throw InvalidInput("log utility weight must be positive");
  return [weight](double r) { return weight * std::log1p(r); };
}

std::function<double(double)> iso_elastic_utility(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidInput("iso-elastic exponent must be in (0,1)");
  return [rho](double r) { return std::pow(r, rho) / rho; };
}

std::function<double(double)> make_utility(const PricingSpec& spec) {
  if (spec.utility == "log") return log_utility(spec.param);
  if (spec.utility == "iso") return iso_elastic_utility(spec.param);
  throw InvalidInput("utility must be \"log\" or \"iso\"");
}

}  // namespace zdgame
