#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zdgame/errors.hpp"
#include "zdgame/game_core.hpp"
#include "zdgame/markov.hpp"
#include "zdgame/numeric.hpp"
#include "zdgame/rng.hpp"
#include "zdgame/state_space.hpp"

namespace zdgame {

// Which payoffs the controller can pin. The controller splits the pinned
// player's payoffs by its own previous action; pinning works iff one group
// sits entirely weakly above the other. k_min names the group holding the
// interval's top, k_max the group holding the bottom. A target of exactly 0
// is never pinnable even when the interval crosses it, since the strategy
// formula divides by the target.
template <typename T>
struct ControlReport {
  bool controllable = false;
  int k_min = 1;
  int k_max = 2;
  bool positive_b = true;  // slope sign realizing positive targets (action 1 on top)
  T lo{};
  T hi{};
  bool zero_excluded = false;

  bool admits(const T& target) const {
    return controllable && lo <= target && target <= hi && target != T(0);
  }

  // The inequality w_k/target >= 1 flips direction with the target's sign, so
  // negative targets in the same window need the opposite slope sign.
  bool positive_b_for(const T& target) const {
    return positive_b == (target > T(0));
  }
};

namespace detail {

template <typename T>
struct ActionExtrema {
  T min_access{}, max_access{};  // payoffs where the controller played 1
  T min_idle{}, max_idle{};      // payoffs where the controller played 2
};

template <typename T>
ActionExtrema<T> action_extrema(const std::vector<T>& pinned_payoffs,
                                const StateSpace& space, int controller) {
  if (pinned_payoffs.size() != space.size())
    throw InvalidInput("payoff vector has wrong state count");
  if (controller < 0 || controller >= space.num_players())
    throw InvalidInput("controller out of range");
  ActionExtrema<T> e;
  bool saw_access = false, saw_idle = false;
  for (std::size_t k = 0; k < space.size(); ++k) {
    const T& w = pinned_payoffs[k];
    if (space.action_of(k, controller) == 1) {
      if (!saw_access || w < e.min_access) e.min_access = w;
      if (!saw_access || w > e.max_access) e.max_access = w;
      saw_access = true;
    } else {
      if (!saw_idle || w < e.min_idle) e.min_idle = w;
      if (!saw_idle || w > e.max_idle) e.max_idle = w;
      saw_idle = true;
    }
  }
  return e;
}

}  // namespace detail

template <typename T>
ControlReport<T> control_report(const std::vector<T>& pinned_payoffs,
                                const StateSpace& space, int controller) {
  const auto e = detail::action_extrema(pinned_payoffs, space, controller);
  ControlReport<T> report;
  if (e.max_idle <= e.min_access) {
    report.controllable = true;
    report.k_min = 1;
    report.k_max = 2;
    report.positive_b = true;
    report.lo = e.max_idle;
    report.hi = e.min_access;
  } else if (e.max_access <= e.min_idle) {
    report.controllable = true;
    report.k_min = 2;
    report.k_max = 1;
    report.positive_b = false;
    report.lo = e.max_access;
    report.hi = e.min_idle;
  } else {
    report.lo = e.max_idle;  // the failed default-ordering interval, for messages
    report.hi = e.min_access;
  }
  report.zero_excluded =
      report.controllable && report.lo <= T(0) && T(0) <= report.hi;
  return report;
}

// Nonzero slopes b of one sign that keep every synthesized probability inside
// [0,1]. An absent cap means any magnitude works (a bound whose denominator
// vanishes is vacuous and dropped).
template <typename T>
struct BRange {
  bool positive_b = true;
  std::optional<T> magnitude_cap;
  std::size_t binding_state = 0;  // state whose probability hits 0 or 1 at the cap

  bool contains(const T& b) const {
    if (b == T(0) || (b > T(0)) != positive_b) return false;
    return !magnitude_cap || abs_value(b) <= *magnitude_cap;
  }
};

namespace detail {

template <typename T>
std::string interval_text(const T& lo, const T& hi) {
  return "[" + scalar_to_string(lo) + ", " + scalar_to_string(hi) + "]";
}

template <typename T>
[[noreturn]] void throw_uncontrollable(const std::vector<T>& pinned_payoffs,
                                       const StateSpace& space, int controller,
                                       const T& target) {
  ControlReport<T> r = control_report(pinned_payoffs, space, controller);
  std::string text = "target " + scalar_to_string(target) + " is not pinnable: ";
  if (!r.controllable)
    text += "no payoff is pinnable (neither action's payoffs dominate the "
            "other's; failed interval " + interval_text(r.lo, r.hi) + ")";
  else
    text += "pinnable payoffs are " + interval_text(r.lo, r.hi) +
            (r.zero_excluded ? " excluding 0" : "") +
            (r.positive_b_for(target) ? " (with b > 0)" : " (with b < 0)");
  throw Infeasible(text);
}

}  // namespace detail

template <typename T>
BRange<T> admissible_b(const std::vector<T>& pinned_payoffs,
                       const StateSpace& space, int controller, const T& target,
                       bool positive_b) {
  if (target == T(0))
    throw Infeasible("a pinned payoff of exactly 0 has no strategy: the "
                     "strategy formula divides by the target");
  const std::size_t n = space.size();
  if (pinned_payoffs.size() != n)
    throw InvalidInput("admissible_b: payoff vector has wrong state count");
  BRange<T> range;
  range.positive_b = positive_b;
  for (std::size_t k = 0; k < n; ++k) {
    T c = T(1) - pinned_payoffs[k] / target;
    const bool access = space.action_of(k, controller) == 1;
    if (access == positive_b ? c > T(0) : c < T(0))
      detail::throw_uncontrollable(pinned_payoffs, space, controller, target);
    if (c == T(0)) continue;
    T cap = T(1) / abs_value(c);
    if (!range.magnitude_cap || cap < *range.magnitude_cap) {
      range.magnitude_cap = std::move(cap);
      range.binding_state = k;
    }
  }
  return range;
}

// Midpoint of the admissible interval, or unit magnitude when unbounded.
template <typename T>
T default_b(const BRange<T>& range) {
  T mag = range.magnitude_cap ? *range.magnitude_cap / T(2) : T(1);
  return range.positive_b ? mag : T(-mag);
}

// The controller's conditional access probabilities as an affine function of
// the pinned player's payoffs,
//   p[view(k)] = [controller accessed in k] + (1 - W_k / target) * b,
// which forces every long-run average of W to equal `target`.
template <typename T>
MemoryOneStrategy<T> pinning_strategy(const std::vector<T>& pinned_payoffs,
                                      const StateSpace& space, int controller,
                                      const T& target, const T& b) {
  if (b == T(0)) throw Infeasible("slope b must be nonzero");
  BRange<T> range =
      admissible_b(pinned_payoffs, space, controller, target, b > T(0));
  if (!range.contains(b)) {
    const std::size_t k = range.binding_state;
    T p = (T(1) - pinned_payoffs[k] / target) * b;
    if (space.action_of(k, controller) == 1) p += T(1);
    std::string label;
    for (int a : space.actions_of(k)) label += static_cast<char>('0' + a);
    throw Infeasible("slope " + scalar_to_string(b) +
                     " pushes the probability for previous state " + label +
                     " to " + scalar_to_string(p) + "; |b| must stay within " +
                     scalar_to_string(*range.magnitude_cap) + " for target " +
                     scalar_to_string(target));
  }
  std::vector<T> probs(space.size());
  for (std::size_t v = 0; v < space.size(); ++v) {
    std::size_t k = space.global_of_view(v, controller);
    T p = (T(1) - pinned_payoffs[k] / target) * b;
    if (space.action_of(k, controller) == 1) p += T(1);
    probs[v] = std::move(p);
  }
  return make_strategy(controller, std::move(probs), space);
}

template <typename T>
struct SynthesisResult {
  MemoryOneStrategy<T> strategy;
  int pinned_player = 0;
  T target{};
  T b{};
  T a{};  // derived slope on the payoff vector; a*target + b = 0
  ControlReport<T> report;
  BRange<T> b_range;
};

namespace detail {

// Self-check: the pin must survive arbitrary co-players. Draws grid-valued
// opponents (multiples of 1/64, away from 0 and 1) so the check is exact in
// rational mode, and compares every long-run average of W against the target.
template <typename T>
void verify_pin(const MemoryOneStrategy<T>& strategy,
                const std::vector<T>& pinned_payoffs, const StateSpace& space,
                const T& target) {
  if (space.num_players() > 6) return;
  CounterRng rng{0x5eedf00dULL};
  for (std::uint64_t draw = 0; draw < 25; ++draw) {
    std::vector<MemoryOneStrategy<T>> profile;
    for (int i = 0; i < space.num_players(); ++i) {
      if (i == strategy.owner) {
        profile.push_back(strategy);
        continue;
      }
      std::vector<T> probs(space.size());
      for (std::size_t v = 0; v < space.size(); ++v) {
        int grid = 4 + static_cast<int>(rng.uniform(draw, i, v) * 57.0);
        probs[v] = T(grid) / T(64);
      }
      profile.push_back(make_strategy(i, std::move(probs), space));
    }
    auto dist = stationary(build_transition_matrix(profile, space));
    T got = long_run_payoff(dist, pinned_payoffs);
    bool ok;
    if constexpr (is_exact_v<T>)
      ok = (got == target);
    else
      ok = abs_value(got - target) <= 1e-9;
    if (!ok)
      throw std::logic_error("pinning self-check failed: long-run payoff " +
                             scalar_to_string(got) + " != " +
                             scalar_to_string(target));
  }
}

}  // namespace detail

// Builds the controller's strategy fixing `pinned_player`'s long-run payoff at
// `target` no matter what anyone else plays. One formula covers own-payoff
// control, two-player opponent control, and the N-player game. Pass b
// explicitly or leave it empty to take the midpoint of the admissible range.
template <typename T>
SynthesisResult<T> synthesize_control(const PayoffMatrix<T>& game,
                                      const StateSpace& space, int controller,
                                      int pinned_player, const T& target,
                                      std::optional<T> b_choice,
                                      bool verify = true) {
  validate_payoffs(game, space);
  if (controller < 0 || controller >= space.num_players())
    throw InvalidInput("synthesize_control: controller out of range");
  if (pinned_player < 0 || pinned_player >= space.num_players())
    throw InvalidInput("synthesize_control: pinned player out of range");
  const std::vector<T>& w = game.payoff_vector(pinned_player);

  SynthesisResult<T> result;
  result.pinned_player = pinned_player;
  result.target = target;
  result.report = control_report(w, space, controller);
  if (b_choice) {
    result.b_range =
        admissible_b(w, space, controller, target, *b_choice > T(0));
    result.b = *b_choice;
  } else {
    if (!result.report.admits(target))
      detail::throw_uncontrollable(w, space, controller, target);
    result.b_range = admissible_b(w, space, controller, target,
                                  result.report.positive_b_for(target));
    result.b = default_b(result.b_range);
  }
  result.a = -result.b / target;
  result.strategy = pinning_strategy(w, space, controller, target, result.b);
  if (verify) detail::verify_pin(result.strategy, w, space, target);
  return result;
}

}  // namespace zdgame
