#pragma once

// Independent reference implementations the tests compare the library
// against. Deliberately different algorithms: occupancy by matrix-power
// averaging instead of a linear solve, SINR equalization by bisection instead
// of the closed form, and plain grid search for small allocations.

#include <cstddef>
#include <random>
#include <vector>

#include "zdgame/linalg.hpp"
#include "zdgame/spectrum.hpp"
#include "zdgame/state_space.hpp"

namespace oracle {

// Cesaro average of the row `initial` of (I + P + ... + P^(m-1))/m with
// m = 2^doublings, via S_2m = (S_m + S_m Q_m)/2, Q_2m = Q_m^2. Converges to
// the long-run occupancy for any row-stochastic P, periodic or reducible.
inline std::vector<double> cesaro_row(const zdgame::Matrix<double>& p,
                                      std::size_t initial, int doublings = 30) {
  const std::size_t n = p.rows;
  zdgame::Matrix<double> s = zdgame::Matrix<double>::identity(n);
  zdgame::Matrix<double> q = p;
  for (int t = 0; t < doublings; ++t) {
    zdgame::Matrix<double> sq = zdgame::matmul(s, q);
    for (std::size_t i = 0; i < s.data.size(); ++i)
      s.data[i] = 0.5 * (s.data[i] + sq.data[i]);
    q = zdgame::matmul(q, q);
  }
  std::vector<double> pi(n);
  for (std::size_t j = 0; j < n; ++j) pi[j] = s(initial, j);
  return pi;
}

// Max-min fairness by bisection on the common SINR: the power a user needs to
// hit a given SINR (with the provider's leftover cap as self-interference) is
// increasing in the SINR, so the budget pins the equalized value.
inline zdgame::PowerAllocation equal_sinr_bisection(
    const zdgame::SpectrumProvider& provider,
    const std::vector<double>& interferer_budgets, int iters = 200) {
  const std::size_t n = provider.users.size();
  auto demand = [&](double gamma, std::vector<double>* lambda) {
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& u = provider.users[k];
      double cross = 0.0;
      for (std::size_t j = 0; j < u.cross_gains.size(); ++j)
        cross += u.cross_gains[j] * interferer_budgets[j];
      const double need =
          gamma * ((u.noise + cross) / u.gain + provider.budget) / (1.0 + gamma);
      if (lambda) (*lambda)[k] = need;
      total += need;
    }
    return total;
  };
  double lo = 0.0, hi = 1.0;
  while (demand(hi, nullptr) < provider.budget) hi *= 2.0;
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (demand(mid, nullptr) < provider.budget ? lo : hi) = mid;
  }
  zdgame::PowerAllocation alloc;
  alloc.sinr = 0.5 * (lo + hi);
  alloc.lambda.resize(n);
  demand(alloc.sinr, &alloc.lambda);
  alloc.k_factor = alloc.sinr / (1.0 + alloc.sinr);
  return alloc;
}

// Brute-force max-min for one or two users: scan the split of the budget and
// keep the best minimum SINR. Refines the grid around the winner.
inline double maxmin_grid_min_sinr(const zdgame::SpectrumProvider& provider,
                                   const std::vector<double>& interferer_budgets) {
  const std::size_t n = provider.users.size();
  if (n == 1)
    return zdgame::user_sinr(provider, 0, provider.budget, interferer_budgets);
  // Each pass keeps a +-(range/10) window around the winner, so 14 passes end
  // with a step near budget * 2e-12 — well inside the 1e-9 comparisons.
  double lo = 0.0, hi = provider.budget, best = -1.0, best_l = 0.0;
  for (int pass = 0; pass < 14; ++pass) {
    const double step = (hi - lo) / 400.0;
    for (int i = 0; i <= 400; ++i) {
      double l1 = lo + step * i;
      if (l1 > provider.budget) l1 = provider.budget;  // ulp guard at the top edge
      const double s1 = zdgame::user_sinr(provider, 0, l1, interferer_budgets);
      const double s2 =
          zdgame::user_sinr(provider, 1, provider.budget - l1, interferer_budgets);
      const double worst = s1 < s2 ? s1 : s2;
      if (worst > best) {
        best = worst;
        best_l = l1;
      }
    }
    const double width = (hi - lo) / 10.0;
    lo = best_l - width > 0.0 ? best_l - width : 0.0;
    hi = best_l + width < provider.budget ? best_l + width : provider.budget;
  }
  return best;
}

// Deterministic scenario generator for oracle cross-checks.
inline zdgame::DownlinkScenario random_scenario(std::mt19937_64& gen,
                                                int max_users = 3) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_int_distribution<int> nprov(2, 3);
  zdgame::DownlinkScenario sc;
  sc.bandwidth = 1e6;
  const int np = nprov(gen);
  std::uniform_int_distribution<int> nusers(1, max_users);
  for (int i = 0; i < np; ++i) {
    zdgame::SpectrumProvider p;
    p.budget = 0.5 + 3.0 * unit(gen);
    const int nu = nusers(gen);
    for (int k = 0; k < nu; ++k) {
      zdgame::SpectrumUser u;
      u.noise = 0.05 + unit(gen);
      u.gain = unit(gen);
      for (int j = 0; j + 1 < np; ++j) u.cross_gains.push_back(0.2 * unit(gen));
      p.users.push_back(u);
    }
    sc.providers.push_back(p);
  }
  return sc;
}

}  // namespace oracle
