#pragma once

#include <string>
#include <vector>

#include "zdgame/markov.hpp"
#include "zdgame/zd_synthesis.hpp"

namespace zdgame {

// Access-fraction curves for a controller that pins its own long-run payoff:
// one row per feasible slope b, one column per opponent. The controller's
// payoff is identical across the row (that is the point of pinning); how
// often it actually transmits is not, and that is what the table shows.
template <typename T>
struct SweepTable {
  std::vector<T> b_values;               // feasible grid points, input order
  std::vector<std::string> opponents;    // column labels
  std::vector<std::vector<T>> access;    // [row][column]
  std::vector<std::pair<T, std::string>> skipped;  // infeasible b, reason
};

template <typename T>
SweepTable<T> access_sweep(const PayoffMatrix<T>& game, const StateSpace& space,
                           int controller, const T& target,
                           const std::vector<T>& b_grid,
                           const std::vector<MemoryOneStrategy<T>>& opponents,
                           std::size_t initial_state = 0) {
  validate_payoffs(game, space);
  if (space.num_players() != 2)
    throw InvalidInput("access_sweep: two-player games only");
  if (controller < 0 || controller > 1)
    throw InvalidInput("access_sweep: controller out of range");
  if (b_grid.empty()) throw InvalidInput("access_sweep: empty b grid");
  if (opponents.empty()) throw InvalidInput("access_sweep: no opponents");
  const int other = 1 - controller;
  for (const auto& q : opponents) {
    if (q.owner != other)
      throw InvalidInput("access_sweep: opponent strategies must belong to "
                         "player " + std::to_string(other + 1));
    if (q.probs.size() != space.size())
      throw InvalidInput("access_sweep: opponent strategy has wrong state count");
  }

  SweepTable<T> table;
  for (const auto& q : opponents) {
    std::string label;
    for (std::size_t v = 0; v < q.probs.size(); ++v)
      label += (v ? "|" : "") + scalar_to_string(q.probs[v]);
    table.opponents.push_back(std::move(label));
  }
  const std::vector<T>& own = game.payoff_vector(controller);
  for (const T& b : b_grid) {
    MemoryOneStrategy<T> p;
    try {
      p = pinning_strategy(own, space, controller, target, b);
    } catch (const Infeasible& e) {
      table.skipped.emplace_back(b, e.what());
      continue;
    }
    std::vector<T> row;
    for (const auto& q : opponents) {
      std::vector<MemoryOneStrategy<T>> profile(2);
      profile[static_cast<std::size_t>(controller)] = p;
      profile[static_cast<std::size_t>(other)] = q;
      auto dist = stationary(build_transition_matrix(profile, space), initial_state);
      row.push_back(access_fraction(dist.pi, space, controller));
    }
    table.b_values.push_back(b);
    table.access.push_back(std::move(row));
  }
  return table;
}

}  // namespace zdgame
