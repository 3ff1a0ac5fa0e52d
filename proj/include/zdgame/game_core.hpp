#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "zdgame/errors.hpp"
#include "zdgame/numeric.hpp"
#include "zdgame/state_space.hpp"

namespace zdgame {

// Per-player payoff vectors in canonical state order.
template <typename T>
struct PayoffMatrix {
  std::vector<std::vector<T>> per_player;  // [player][state]

  int num_players() const { return static_cast<int>(per_player.size()); }

  const std::vector<T>& payoff_vector(int player) const {
    if (player < 0 || player >= num_players())
      throw InvalidInput("payoff_vector: player index out of range");
    return per_player[static_cast<std::size_t>(player)];
  }
};

template <typename T>
void validate_payoffs(const PayoffMatrix<T>& m, const StateSpace& space) {
  if (m.num_players() != space.num_players())
    throw InvalidInput("payoff matrix has wrong player count");
  for (const auto& vec : m.per_player) {
    if (vec.size() != space.size())
      throw InvalidInput("payoff vector has wrong state count");
    if constexpr (!is_exact_v<T>) {
      for (const T& v : vec)
        if (!std::isfinite(v)) throw InvalidInput("payoff must be finite");
    }
  }
}

// Conditional access probabilities of one player, indexed by that player's
// view of the previous joint state (own action first, StateSpace::view_of).
template <typename T>
struct MemoryOneStrategy {
  int owner = 0;
  std::vector<T> probs;
};

template <typename T>
using OpponentPolicy = MemoryOneStrategy<T>;

// Float mode clamps values within this slack of [0,1]; anything farther out
// is an error. Exact mode tolerates nothing.
inline constexpr double kProbSlack = 1e-12;

template <typename T>
MemoryOneStrategy<T> make_strategy(int owner, std::vector<T> probs,
                                   const StateSpace& space) {
  if (owner < 0 || owner >= space.num_players())
    throw InvalidInput("strategy owner out of range");
  if (probs.size() != space.size())
    throw InvalidInput("strategy must give one probability per state (" +
                       std::to_string(space.size()) + " expected, got " +
                       std::to_string(probs.size()) + ")");
  for (T& p : probs) {
    if constexpr (is_exact_v<T>) {
      if (p < T(0) || p > T(1))
        throw InvalidInput("strategy probability outside [0,1]");
    } else {
      if (!std::isfinite(p) || p < -kProbSlack || p > 1.0 + kProbSlack)
        throw InvalidInput("strategy probability outside [0,1]: " + format_real(p));
      if (p < 0.0) p = 0.0;
      if (p > 1.0) p = 1.0;
    }
  }
  return MemoryOneStrategy<T>{owner, std::move(probs)};
}

template <typename T>
void check_strategy_profile(const std::vector<MemoryOneStrategy<T>>& strategies,
                            const StateSpace& space) {
  if (static_cast<int>(strategies.size()) != space.num_players())
    throw InvalidInput("need exactly one strategy per player");
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (strategies[i].owner != static_cast<int>(i))
      throw InvalidInput("strategy profile must be ordered by owner");
    if (strategies[i].probs.size() != space.size())
      throw InvalidInput("strategy has wrong state count");
  }
}

// Payoff matrix of the two-provider channel sharing game: a provider that
// accesses alone gets its solo rate R, simultaneous access discounts it to
// theta*R, staying off the channel pays zero.
template <typename T>
PayoffMatrix<T> make_two_provider_game(const T& r1, const T& r2, const T& theta1,
                                       const T& theta2) {
  PayoffMatrix<T> m;
  m.per_player = {
      {theta1 * r1, r1, T(0), T(0)},
      {theta2 * r2, T(0), r2, T(0)},
  };
  return m;
}

// Three providers with rate levels R, alpha1*R (one interferer), alpha2*R
// (two interferers) and zero when off the channel.
template <typename T>
PayoffMatrix<T> make_three_provider_game(const std::vector<T>& r,
                                         const std::vector<T>& alpha1,
                                         const std::vector<T>& alpha2) {
  if (r.size() != 3 || alpha1.size() != 3 || alpha2.size() != 3)
    throw InvalidInput("three-provider game needs 3 rates and 3+3 discounts");
  StateSpace space(3);
  PayoffMatrix<T> m;
  m.per_player.assign(3, std::vector<T>(space.size(), T(0)));
  for (std::size_t s = 0; s < space.size(); ++s) {
    int accessors = 0;
    for (int i = 0; i < 3; ++i)
      if (space.action_of(s, i) == 1) ++accessors;
    for (int i = 0; i < 3; ++i) {
      if (space.action_of(s, i) != 1) continue;
      std::size_t si = static_cast<std::size_t>(i);
      if (accessors == 1)
        m.per_player[si][s] = r[si];
      else if (accessors == 2)
        m.per_player[si][s] = alpha1[si] * r[si];
      else
        m.per_player[si][s] = alpha2[si] * r[si];
    }
  }
  return m;
}

}  // namespace zdgame
