#include "zdgame/sim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zdgame {

SimTables make_sim_tables(const PayoffMatrix<double>& game,
                          const std::vector<MemoryOneStrategy<double>>& strategies,
                          const StateSpace& space) {
  validate_payoffs(game, space);
  check_strategy_profile(strategies, space);
  SimTables t;
  t.players = space.num_players();
  t.nstates = space.size();
  t.prob.resize(static_cast<std::size_t>(t.players) * t.nstates);
  t.payoff.resize(t.prob.size());
  for (int i = 0; i < t.players; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * t.nstates;
    for (std::size_t s = 0; s < t.nstates; ++s) {
      t.prob[base + s] = strategies[static_cast<std::size_t>(i)].probs[space.view_of(s, i)];
      t.payoff[base + s] = game.per_player[static_cast<std::size_t>(i)][s];
    }
  }
  return t;
}

namespace {

void check_config(const SimConfig& config, const StateSpace& space) {
  if (config.rounds == 0) throw InvalidInput("simulation needs at least one round");
  if (config.replications == 0)
    throw InvalidInput("simulation needs at least one replication");
  if (config.trace_stride == 0) throw InvalidInput("trace stride must be positive");
  if (config.initial_state >= space.size())
    throw InvalidInput("initial state out of range");
  if (config.jobs < 0) throw InvalidInput("jobs must be nonnegative");
}

void run_one(const SimTables& tables, const SimConfig& config, std::uint64_t rep,
             ReplicationSummary& summary, Trace* trace) {
  const CounterRng rng{config.seed};
  const std::size_t players = static_cast<std::size_t>(tables.players);
  summary.replication = rep;
  summary.state_fraction.assign(tables.nstates, 0.0);
  summary.mean_payoff.assign(players, 0.0);
  summary.access_fraction.assign(players, 0.0);
  if (trace) trace->replication = rep;

  std::vector<std::uint64_t> state_counts(tables.nstates, 0);
  run_rounds(tables, rng, rep, config.rounds, config.initial_state,
             [&](std::uint64_t round, std::size_t state,
                 const std::vector<double>& payoffs,
                 const std::vector<double>& means) {
               ++state_counts[state];
               if (trace &&
                   (round % config.trace_stride == 0 || round == config.rounds)) {
                 trace->round.push_back(round);
                 trace->state.push_back(static_cast<std::uint32_t>(state));
                 trace->payoff.insert(trace->payoff.end(), payoffs.begin(),
                                      payoffs.end());
                 trace->running_mean.insert(trace->running_mean.end(),
                                            means.begin(), means.end());
               }
               if (round == config.rounds) summary.mean_payoff = means;
             });

  const double total = static_cast<double>(config.rounds);
  for (std::size_t s = 0; s < tables.nstates; ++s)
    summary.state_fraction[s] = static_cast<double>(state_counts[s]) / total;
  const int bits = tables.players;
  for (std::size_t i = 0; i < players; ++i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < tables.nstates; ++s)
      if (((s >> (bits - 1 - static_cast<int>(i))) & 1u) == 0)
        acc += summary.state_fraction[s];
    summary.access_fraction[i] = acc;
  }
}

SimResult run_all(const PayoffMatrix<double>& game,
                  const std::vector<MemoryOneStrategy<double>>& strategies,
                  const StateSpace& space, const SimConfig& config,
                  bool threaded) {
  check_config(config, space);
  const SimTables tables = make_sim_tables(game, strategies, space);
  SimResult result;
  result.summaries.resize(config.replications);
  if (config.record_trace) result.traces.resize(config.replications);

  const std::int64_t reps = static_cast<std::int64_t>(config.replications);
#ifdef _OPENMP
  if (threaded) {
    const int threads = config.jobs > 0 ? config.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t r = 0; r < reps; ++r) {
      const std::size_t ri = static_cast<std::size_t>(r);
      run_one(tables, config, static_cast<std::uint64_t>(r), result.summaries[ri],
              config.record_trace ? &result.traces[ri] : nullptr);
    }
    return result;
  }
#else
  (void)threaded;
#endif
  for (std::int64_t r = 0; r < reps; ++r) {
    const std::size_t ri = static_cast<std::size_t>(r);
    run_one(tables, config, static_cast<std::uint64_t>(r), result.summaries[ri],
            config.record_trace ? &result.traces[ri] : nullptr);
  }
  return result;
}

}  // namespace

SimResult simulate(const PayoffMatrix<double>& game,
                   const std::vector<MemoryOneStrategy<double>>& strategies,
                   const StateSpace& space, const SimConfig& config) {
  return run_all(game, strategies, space, config, true);
}

SimResult simulate_serial(const PayoffMatrix<double>& game,
                          const std::vector<MemoryOneStrategy<double>>& strategies,
                          const StateSpace& space, const SimConfig& config) {
  return run_all(game, strategies, space, config, false);
}

std::vector<std::uint64_t> rounds_to_band(
    const PayoffMatrix<double>& game,
    const std::vector<MemoryOneStrategy<double>>& strategies,
    const StateSpace& space, const SimConfig& config, int player, double target,
    double halfwidth) {
  check_config(config, space);
  if (player < 0 || player >= space.num_players())
    throw InvalidInput("rounds_to_band: player out of range");
  if (!(halfwidth > 0.0)) throw InvalidInput("rounds_to_band: band must be positive");
  const SimTables tables = make_sim_tables(game, strategies, space);
  std::vector<std::uint64_t> settle(config.replications, 0);

  const std::int64_t reps = static_cast<std::int64_t>(config.replications);
#ifdef _OPENMP
  const int threads = config.jobs > 0 ? config.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (std::int64_t r = 0; r < reps; ++r) {
    const CounterRng rng{config.seed};
    std::uint64_t last_outside = 0;
    run_rounds(tables, rng, static_cast<std::uint64_t>(r), config.rounds,
               config.initial_state,
               [&](std::uint64_t round, std::size_t, const std::vector<double>&,
                   const std::vector<double>& means) {
                 const double err = means[static_cast<std::size_t>(player)] - target;
                 if (err > halfwidth || err < -halfwidth) last_outside = round;
               });
    settle[static_cast<std::size_t>(r)] =
        last_outside == config.rounds ? config.rounds + 1 : last_outside + 1;
  }
  return settle;
}

}  // namespace zdgame
