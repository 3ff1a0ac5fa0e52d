#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "zdgame/errors.hpp"
#include "zdgame/game_core.hpp"
#include "zdgame/linalg.hpp"
#include "zdgame/numeric.hpp"
#include "zdgame/state_space.hpp"

namespace zdgame {

// Row l = current joint state, column k = next joint state. Players act
// independently, each consulting its own view of l.
template <typename T>
Matrix<T> build_transition_matrix(
    const std::vector<MemoryOneStrategy<T>>& strategies,
    const StateSpace& space) {
  check_strategy_profile(strategies, space);
  const std::size_t n = space.size();
  const int players = space.num_players();
  Matrix<T> m(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      T prob(1);
      for (int i = 0; i < players; ++i) {
        const T& p = strategies[static_cast<std::size_t>(i)].probs[space.view_of(l, i)];
        if (space.action_of(k, i) == 1)
          prob *= p;
        else
          prob *= T(1) - p;
        if (prob == T(0)) break;
      }
      m(l, k) = prob;
    }
  }
  return m;
}

template <typename T>
struct StationaryDistribution {
  std::vector<T> pi;
  bool unique = false;       // exactly one closed communicating class
  bool irreducible = false;  // the whole chain is one communicating class
  bool aperiodic = false;    // every closed class has period 1
};

namespace detail {

// Period of one strongly connected class: gcd of (level[u]+1-level[v]) over
// its internal edges, from a BFS layering.
inline std::size_t class_period(const std::vector<std::vector<std::size_t>>& adj,
                                const std::vector<std::size_t>& members) {
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(adj.size(), none);
  std::vector<std::size_t> queue{members.front()};
  std::vector<bool> in_class(adj.size(), false);
  for (std::size_t m : members) in_class[m] = true;
  level[members.front()] = 0;
  std::size_t period = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t u = queue[head];
    for (std::size_t v : adj[u]) {
      if (!in_class[v]) continue;
      if (level[v] == none) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        std::size_t diff = level[u] + 1 >= level[v] ? level[u] + 1 - level[v]
                                                    : level[v] - level[u] - 1;
        period = std::gcd(period, diff);
      }
    }
  }
  return period == 0 ? 1 : period;
}

// Iterative Tarjan; fills comp with component ids, returns the count.
inline std::size_t strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& adj,
    std::vector<std::size_t>& comp) {
  const std::size_t n = adj.size();
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, none), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack, call_node, call_edge;
  comp.assign(n, none);
  std::size_t next_index = 0, ncomp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != none) continue;
    call_node.push_back(root);
    call_edge.push_back(0);
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call_node.empty()) {
      std::size_t v = call_node.back();
      if (call_edge.back() < adj[v].size()) {
        std::size_t w = adj[v][call_edge.back()++];
        if (index[w] == none) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_node.push_back(w);
          call_edge.push_back(0);
        } else if (on_stack[w] && index[w] < lowlink[v]) {
          lowlink[v] = index[w];
        }
      } else {
        call_node.pop_back();
        call_edge.pop_back();
        if (lowlink[v] == index[v]) {
          while (true) {
            std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = ncomp;
            if (w == v) break;
          }
          ++ncomp;
        }
        if (!call_node.empty() && lowlink[v] < lowlink[call_node.back()])
          lowlink[call_node.back()] = lowlink[v];
      }
    }
  }
  return ncomp;
}

// Stationary vector of an irreducible chain given by the rows/columns of m
// restricted to `members`: solve (M^T - I) pi = 0 with the normalization
// row Sum(pi) = 1 replacing the last equation.
template <typename T>
std::vector<T> class_stationary(const Matrix<T>& m,
                                const std::vector<std::size_t>& members) {
  const std::size_t c = members.size();
  Matrix<T> a(c, c);
  std::vector<T> b(c, T(0));
  for (std::size_t row = 0; row + 1 < c; ++row)
    for (std::size_t col = 0; col < c; ++col) {
      a(row, col) = m(members[col], members[row]);
      if (row == col) a(row, col) -= T(1);
    }
  for (std::size_t col = 0; col < c; ++col) a(c - 1, col) = T(1);
  b[c - 1] = T(1);
  std::vector<T> pi = solve_linear(std::move(a), std::move(b));
  if constexpr (!is_exact_v<T>) {
    T total(0);
    for (T& v : pi) {
      if (v < T(0)) v = T(0);
      total += v;
    }
    for (T& v : pi) v /= total;
  }
  return pi;
}

}  // namespace detail

// Long-run distribution over joint states. Reducible chains are resolved by
// the probability of absorption into each closed class from `initial`, so the
// result matches the Cesaro limit of the empirical state frequencies.
template <typename T>
StationaryDistribution<T> stationary(const Matrix<T>& m, std::size_t initial = 0) {
  if (m.rows != m.cols || m.rows == 0)
    throw InvalidInput("stationary: need a square transition matrix");
  const std::size_t n = m.rows;
  if (initial >= n) throw InvalidInput("stationary: initial state out of range");
  for (std::size_t l = 0; l < n; ++l) {
    T row_sum(0);
    for (std::size_t k = 0; k < n; ++k) {
      if (m(l, k) < T(0)) throw InvalidInput("stationary: negative entry");
      row_sum += m(l, k);
    }
    bool stochastic;
    if constexpr (is_exact_v<T>)
      stochastic = (row_sum == T(1));
    else
      stochastic = abs_value(row_sum - T(1)) <= 1e-12;
    if (!stochastic)
      throw InvalidInput("stationary: row " + std::to_string(l) +
                         " does not sum to 1");
  }

  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      if (m(l, k) != T(0)) adj[l].push_back(k);

  std::vector<std::size_t> comp;
  const std::size_t ncomp = detail::strongly_connected_components(adj, comp);

  std::vector<bool> closed(ncomp, true);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k : adj[l])
      if (comp[l] != comp[k]) closed[comp[l]] = false;

  std::vector<std::vector<std::size_t>> class_members;  // closed classes only
  std::vector<std::size_t> class_of_comp(ncomp, static_cast<std::size_t>(-1));
  for (std::size_t c = 0; c < ncomp; ++c)
    if (closed[c]) {
      class_of_comp[c] = class_members.size();
      class_members.emplace_back();
    }
  std::vector<std::size_t> transient;  // global indices, ascending
  std::vector<std::size_t> transient_local(n, static_cast<std::size_t>(-1));
  for (std::size_t s = 0; s < n; ++s) {
    if (closed[comp[s]]) {
      class_members[class_of_comp[comp[s]]].push_back(s);
    } else {
      transient_local[s] = transient.size();
      transient.push_back(s);
    }
  }
  const std::size_t nclosed = class_members.size();

  // Weight of each closed class in the long run, starting from `initial`.
  std::vector<T> alpha(nclosed, T(0));
  if (closed[comp[initial]]) {
    alpha[class_of_comp[comp[initial]]] = T(1);
  } else {
    const std::size_t t = transient.size();
    Matrix<T> iq(t, t);
    for (std::size_t r = 0; r < t; ++r) {
      iq(r, r) = T(1);
      for (std::size_t c = 0; c < t; ++c)
        iq(r, c) -= m(transient[r], transient[c]);
    }
    for (std::size_t j = 0; j < nclosed; ++j) {
      std::vector<T> reach(t, T(0));
      for (std::size_t r = 0; r < t; ++r)
        for (std::size_t s : class_members[j]) reach[r] += m(transient[r], s);
      std::vector<T> absorbed = solve_linear(iq, std::move(reach));
      alpha[j] = absorbed[transient_local[initial]];
    }
  }

  StationaryDistribution<T> out;
  out.pi.assign(n, T(0));
  out.unique = (nclosed == 1);
  out.irreducible = (nclosed == 1 && ncomp == 1);
  out.aperiodic = true;
  for (const auto& members : class_members)
    if (detail::class_period(adj, members) != 1) out.aperiodic = false;
  for (std::size_t j = 0; j < nclosed; ++j) {
    if (alpha[j] == T(0)) continue;
    std::vector<T> pij = detail::class_stationary(m, class_members[j]);
    for (std::size_t k = 0; k < class_members[j].size(); ++k)
      out.pi[class_members[j][k]] += alpha[j] * pij[k];
  }
  return out;
}

template <typename T>
T long_run_payoff(const StationaryDistribution<T>& dist,
                  const std::vector<T>& payoff_vector) {
  if (payoff_vector.size() != dist.pi.size())
    throw InvalidInput("long_run_payoff: size mismatch");
  return dot(dist.pi, payoff_vector);
}

// Long-run fraction of rounds in which the player holds the channel.
template <typename T>
T access_fraction(const std::vector<T>& pi, const StateSpace& space, int player) {
  if (pi.size() != space.size())
    throw InvalidInput("access_fraction: distribution has wrong state count");
  if (player < 0 || player >= space.num_players())
    throw InvalidInput("access_fraction: player out of range");
  T total(0);
  for (std::size_t k = 0; k < space.size(); ++k)
    if (space.action_of(k, player) == 1) total += pi[k];
  return total;
}

// One player's strategy column after marginalizing the next joint state down
// to that player's next action: entry[l] = P(player picks action 1 | state l)
// minus 1 if the player played action 1 in l. With verify set, cross-checks
// the closed form against the explicit sum of transition columns.
template <typename T>
std::vector<T> collapse_column(const std::vector<MemoryOneStrategy<T>>& strategies,
                               const StateSpace& space, int player,
                               bool verify = false) {
  check_strategy_profile(strategies, space);
  if (player < 0 || player >= space.num_players())
    throw InvalidInput("collapse_column: player out of range");
  const std::size_t n = space.size();
  std::vector<T> col(n);
  const auto& probs = strategies[static_cast<std::size_t>(player)].probs;
  for (std::size_t l = 0; l < n; ++l) {
    col[l] = probs[space.view_of(l, player)];
    if (space.action_of(l, player) == 1) col[l] -= T(1);
  }
  if (verify) {
    Matrix<T> m = build_transition_matrix(strategies, space);
    for (std::size_t l = 0; l < n; ++l) {
      T acc(0);
      for (std::size_t k = 0; k < n; ++k)
        if (space.action_of(k, player) == 1) acc += m(l, k);
      if (space.action_of(l, player) == 1) acc -= T(1);
      bool match;
      if constexpr (is_exact_v<T>)
        match = (acc == col[l]);
      else
        match = abs_value(acc - col[l]) <= 1e-12;
      if (!match) throw std::logic_error("collapse_column: marginal mismatch");
    }
  }
  return col;
}

// Two-player long-run average of f without solving for the stationary
// distribution: ratio of two 4x4 determinants whose middle columns are the
// collapsed strategy columns. A vanishing normalizer means the chain's long
// run depends on where it starts, and the ratio form does not apply.
template <typename T>
T determinant_payoff(const MemoryOneStrategy<T>& x, const MemoryOneStrategy<T>& y,
                     const std::vector<T>& f, const StateSpace& space) {
  if (space.num_players() != 2)
    throw InvalidInput("determinant_payoff: two-player only");
  if (f.size() != space.size())
    throw InvalidInput("determinant_payoff: f has wrong state count");
  std::vector<MemoryOneStrategy<T>> profile{x, y};
  profile[0].owner = 0;
  profile[1].owner = 1;
  Matrix<T> m = build_transition_matrix(profile, space);
  std::vector<T> col_x = collapse_column(profile, space, 0);
  std::vector<T> col_y = collapse_column(profile, space, 1);

  Matrix<T> d(4, 4);
  for (std::size_t l = 0; l < 4; ++l) {
    d(l, 0) = m(l, 0);
    if (l == 0) d(l, 0) -= T(1);
    d(l, 1) = col_x[l];
    d(l, 2) = col_y[l];
  }
  Matrix<T> dn = d;
  for (std::size_t l = 0; l < 4; ++l) {
    d(l, 3) = f[l];
    dn(l, 3) = T(1);
  }
  T denom = determinant(dn);
  if (denom == T(0))
    throw Degenerate("determinant payoff undefined: the chain has no unique "
                     "stationary distribution (normalizer is zero)");
  return determinant(d) / denom;
}

}  // namespace zdgame
