#pragma once

#include <cstdint>
#include <vector>

#include "zdgame/errors.hpp"
#include "zdgame/game_core.hpp"
#include "zdgame/rng.hpp"
#include "zdgame/state_space.hpp"

namespace zdgame {

struct SimConfig {
  std::uint64_t seed = 0;
  std::uint64_t rounds = 1000;
  std::uint64_t replications = 1;
  std::uint64_t trace_stride = 1;  // sampled rounds; the final round is always kept
  std::size_t initial_state = 0;
  bool record_trace = true;
  int jobs = 1;  // worker threads; 0 picks the runtime default
};

// Flattened lookup tables the round loop indexes by global state.
struct SimTables {
  int players = 0;
  std::size_t nstates = 0;
  std::vector<double> prob;    // [player * nstates + state] chance of access
  std::vector<double> payoff;  // [player * nstates + state]
};

SimTables make_sim_tables(const PayoffMatrix<double>& game,
                          const std::vector<MemoryOneStrategy<double>>& strategies,
                          const StateSpace& space);

// One replication's round loop. The observer sees, for every round in order:
// (round, state entered, per-player payoffs this round, running means over
// rounds 1..round). Draws depend only on (seed, replication, player, round),
// never on scheduling.
template <typename Observer>
void run_rounds(const SimTables& tables, const CounterRng& rng,
                std::uint64_t replication, std::uint64_t rounds,
                std::size_t initial_state, Observer&& observe) {
  const std::size_t n = tables.nstates;
  std::size_t state = initial_state;
  std::vector<double> totals(static_cast<std::size_t>(tables.players), 0.0);
  std::vector<double> row(totals.size(), 0.0);
  std::vector<double> means(totals.size(), 0.0);
  for (std::uint64_t round = 1; round <= rounds; ++round) {
    std::size_t next = 0;
    for (int i = 0; i < tables.players; ++i) {
      const double u = rng.uniform(replication, static_cast<std::uint64_t>(i), round);
      const bool access = u < tables.prob[static_cast<std::size_t>(i) * n + state];
      next = (next << 1) | (access ? 0u : 1u);
    }
    state = next;
    for (std::size_t i = 0; i < totals.size(); ++i) {
      row[i] = tables.payoff[i * n + state];
      totals[i] += row[i];
      means[i] = totals[i] / static_cast<double>(round);
    }
    observe(round, state, row, means);
  }
}

struct ReplicationSummary {
  std::uint64_t replication = 0;
  std::vector<double> state_fraction;  // per state, over all rounds
  std::vector<double> mean_payoff;     // per player
  std::vector<double> access_fraction; // per player
};

// Sampled rounds of one replication, stored column-flat: payoff and
// running_mean hold players-many values per recorded round.
struct Trace {
  std::uint64_t replication = 0;
  std::vector<std::uint64_t> round;
  std::vector<std::uint32_t> state;
  std::vector<double> payoff;
  std::vector<double> running_mean;
};

struct SimResult {
  std::vector<ReplicationSummary> summaries;
  std::vector<Trace> traces;  // empty when tracing is off
};

// Threaded over replications; summaries at full resolution regardless of the
// trace stride. simulate_serial is the reference implementation the threaded
// path must match exactly.
SimResult simulate(const PayoffMatrix<double>& game,
                   const std::vector<MemoryOneStrategy<double>>& strategies,
                   const StateSpace& space, const SimConfig& config);
SimResult simulate_serial(const PayoffMatrix<double>& game,
                          const std::vector<MemoryOneStrategy<double>>& strategies,
                          const StateSpace& space, const SimConfig& config);

// Per replication: the first round from which the running mean of `player`'s
// payoff stays inside target +/- halfwidth through the final round, or
// rounds + 1 if it never settles.
std::vector<std::uint64_t> rounds_to_band(
    const PayoffMatrix<double>& game,
    const std::vector<MemoryOneStrategy<double>>& strategies,
    const StateSpace& space, const SimConfig& config, int player, double target,
    double halfwidth);

}  // namespace zdgame
