#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zdgame/errors.hpp"

namespace zdgame {

// Joint-action states of an N-player binary-action game. Actions are 1
// ("access") and 2 ("no access"). States are ordered lexicographically by
// player index, so for two players the order is (1,1),(1,2),(2,1),(2,2).
// Transition-matrix rows and columns, payoff vectors and simulation traces
// all use this ordering.
class StateSpace {
 public:
  explicit StateSpace(int n_players) : n_players_(n_players) {
    if (n_players < 1 || n_players > 20)
      throw InvalidInput("StateSpace: player count must be in [1,20]");
  }

  int num_players() const { return n_players_; }
  std::size_t size() const { return std::size_t{1} << n_players_; }

  std::size_t index_of(std::span<const int> actions) const {
    if (static_cast<int>(actions.size()) != n_players_)
      throw InvalidInput("state_index: wrong action arity");
    std::size_t idx = 0;
    for (int a : actions) {
      if (a != 1 && a != 2) throw InvalidInput("state_index: action must be 1 or 2");
      idx = (idx << 1) | static_cast<std::size_t>(a - 1);
    }
    return idx;
  }

  std::vector<int> actions_of(std::size_t state) const {
    std::vector<int> actions(n_players_);
    for (int i = 0; i < n_players_; ++i) actions[i] = action_of(state, i);
    return actions;
  }

  int action_of(std::size_t state, int player) const {
    return 1 + static_cast<int>((state >> (n_players_ - 1 - player)) & 1u);
  }

  // Reindexes a state so that `player`'s own action becomes the leading
  // coordinate; the remaining players keep their relative order. Memory-one
  // strategies are stored in this own-action-first order. For two players
  // that is the (own previous action, opponent previous action) convention:
  // in global state (1,2) the column player consults its entry for (2,1).
  std::size_t view_of(std::size_t state, int player) const {
    std::size_t own = (state >> (n_players_ - 1 - player)) & 1u;
    std::size_t rest = 0;
    for (int j = 0; j < n_players_; ++j) {
      if (j == player) continue;
      rest = (rest << 1) | ((state >> (n_players_ - 1 - j)) & 1u);
    }
    return (own << (n_players_ - 1)) | rest;
  }

  // Inverse of view_of: the global state a player's own-action-first index
  // refers to.
  std::size_t global_of_view(std::size_t view, int player) const {
    std::size_t state = ((view >> (n_players_ - 1)) & 1u)
                        << (n_players_ - 1 - player);
    int bit = n_players_ - 2;
    for (int j = 0; j < n_players_; ++j) {
      if (j == player) continue;
      state |= ((view >> bit) & 1u) << (n_players_ - 1 - j);
      --bit;
    }
    return state;
  }

  std::size_t all_access_state() const { return 0; }

 private:
  int n_players_;
};

}  // namespace zdgame
