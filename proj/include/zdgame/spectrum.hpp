#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zdgame/game_core.hpp"

namespace zdgame {

// One end user, as seen by its provider's transmitter: receiver noise power
// (Watts), the path gain of the serving link, and the gains from each other
// provider's transmitter into this receiver (ascending provider order).
struct SpectrumUser {
  double noise = 0.0;
  double gain = 0.0;
  std::vector<double> cross_gains;
};

// Optional pricing block: the provider's target rate maximizes
// utility(R) - price * R for a concave increasing utility.
struct PricingSpec {
  std::string utility;  // "log": param*ln(1+R); "iso": R^param/param
  double param = 1.0;
  double price = 1.0;
};

struct SpectrumProvider {
  double budget = 0.0;  // total transmit power cap, Watts
  std::vector<SpectrumUser> users;
  std::optional<PricingSpec> pricing;
};

struct DownlinkScenario {
  double bandwidth = 0.0;  // per-user channel bandwidth, Hz
  std::vector<SpectrumProvider> providers;  // 2 or 3
};

// Own gains must be in (0,1] and noise positive; cross gains may be 0 and
// budgets may be 0 here — building the game rejects them later, as a
// degenerate game rather than a malformed scenario.
void validate_scenario(const DownlinkScenario& scenario);

// SINR of one user when its provider gives it `lambda` of the cap and the
// other providers transmit at `interferer_budgets` (aligned with
// cross_gains). The provider's remaining cap appears as self-interference.
double user_sinr(const SpectrumProvider& provider, std::size_t user,
                 double lambda, const std::vector<double>& interferer_budgets);

// Water-filling is the wrong instinct here: the max-min fair split equalizes
// the SINR across users, and the common value has the closed form K/(1-K).
struct PowerAllocation {
  std::vector<double> lambda;
  double k_factor = 0.0;
  double sinr = 0.0;
};

PowerAllocation maxmin_allocation(const SpectrumProvider& provider,
                                  const std::vector<double>& interferer_budgets);
PowerAllocation maxmin_solo(const SpectrumProvider& provider);

// Aggregate Shannon rate over a provider's users at the common SINR.
double shannon_rate(double bandwidth, std::size_t n_users, double sinr);

struct GameParameters {
  std::vector<double> solo_rate;  // R_i, bits/s
  std::vector<double> theta;      // two providers: simultaneous-access discount
  // Three providers: discounts under one and under two interferers. alpha1 is
  // averaged over the two possible interferers; alpha_symmetric records
  // whether they agreed to 1e-9.
  std::vector<double> alpha1;
  std::vector<double> alpha2;
  bool alpha_symmetric = true;
  std::vector<std::optional<double>> target_rate;  // from pricing, when given
};

struct SpectrumGame {
  PayoffMatrix<double> payoffs;  // canonical state order, exact per-state rates
  GameParameters params;
};

// Reduces the physical scenario to the access game: solo rate when a provider
// transmits alone, discounted rates under interference, zero when off. The
// discounts must land strictly inside (0,1) or the game is degenerate.
SpectrumGame build_game(const DownlinkScenario& scenario);

// Smallest maximizer of utility(R) - price * R over R >= 0.
double optimal_rate(const std::function<double(double)>& utility, double price);
std::function<double(double)> log_utility(double weight);
std::function<double(double)> iso_elastic_utility(double rho);
std::function<double(double)> make_utility(const PricingSpec& spec);

}  // namespace zdgame
