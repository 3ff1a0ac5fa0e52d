#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "game_spec.hpp"
#include "zdgame/csv.hpp"
#include "zdgame/errors.hpp"
#include "zdgame/file_formats.hpp"
#include "zdgame/markov.hpp"
#include "zdgame/sim.hpp"
#include "zdgame/spectrum.hpp"
#include "zdgame/sweep.hpp"
#include "zdgame/zd_synthesis.hpp"

namespace zdgame::cli {

namespace {

const nlohmann::json& need(const nlohmann::json& config, const std::string& key) {
  if (!config.is_object() || !config.contains(key))
    throw InvalidInput("config: missing field \"" + key + "\"");
  return config.at(key);
}

int need_player(const nlohmann::json& config, const std::string& key, int players) {
  const auto& v = need(config, key);
  if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > players)
    throw InvalidInput("config: \"" + key + "\" must be a player index in 1.." +
                       std::to_string(players));
  return v.get<int>();
}

std::string view_label(std::size_t view, int players) {
  std::string s;
  for (int bit = players - 1; bit >= 0; --bit)
    s += static_cast<char>('1' + ((view >> bit) & 1u));
  return s;
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

template <typename T>
std::string admissible_text(const BRange<T>& range) {
  const std::string cap =
      range.magnitude_cap ? scalar_to_string(*range.magnitude_cap) : "";
  if (range.positive_b)
    return range.magnitude_cap ? "(0, " + cap + "]" : "(0, inf)";
  return range.magnitude_cap ? "[-" + cap + ", 0)" : "(-inf, 0)";
}

template <typename T>
Manifest synthesize_impl(const nlohmann::json& config, const std::string& out_dir) {
  Manifest manifest{"synthesize", config, {}, {}};
  OutputSink sink(out_dir, manifest);

  ResolvedGame<T> rg = game_from_spec<T>(need(config, "game"));
  StateSpace space(rg.game.num_players());
  const int players = space.num_players();
  const int controller = need_player(config, "controller", players) - 1;
  const int pinned = need_player(config, "pinned_player", players) - 1;
  const T target = load_scalar<T>(need(config, "target"), "target");

  std::optional<T> b_choice;
  const auto& bj = need(config, "b");
  if (!(bj.is_string() && bj.get<std::string>() == "auto"))
    b_choice = load_scalar<T>(bj, "b");

  SynthesisResult<T> result =
      synthesize_control(rg.game, space, controller, pinned, target, b_choice);

  std::ostringstream out;
  out << "players: " << players << "\n";
  out << "controller: player " << controller + 1 << " pinning "
      << (pinned == controller ? "its own payoff"
                               : "player " + std::to_string(pinned + 1) + "'s payoff")
      << "\n";
  if (result.report.controllable) {
    out << "pinnable payoffs: " << detail::interval_text(result.report.lo, result.report.hi)
        << (result.report.zero_excluded ? " excluding 0" : "") << "\n";
  }
  out << "target: " << scalar_to_string(result.target) << "\n";
  out << "slope b: " << scalar_to_string(result.b) << "  (admissible "
      << admissible_text(result.b_range) << ")\n";
  out << "payoff coefficient a: " << scalar_to_string(result.a) << "\n";
  out << "strategy for player " << controller + 1 << " (own action first):\n";
  for (std::size_t v = 0; v < space.size(); ++v)
    out << "  p[" << view_label(v, players)
        << "] = " << scalar_to_string(result.strategy.probs[v]) << "\n";
  std::cout << out.str();

  nlohmann::json probs = nlohmann::json::array();
  for (const T& p : result.strategy.probs) probs.push_back(store_scalar(p));
  nlohmann::json synthesis;
  synthesis["controller"] = controller + 1;
  synthesis["pinned_player"] = pinned + 1;
  synthesis["target"] = store_scalar(result.target);
  synthesis["b"] = store_scalar(result.b);
  synthesis["a"] = store_scalar(result.a);
  synthesis["b_sign"] = result.b_range.positive_b ? "positive" : "negative";
  if (result.b_range.magnitude_cap)
    synthesis["b_cap"] = store_scalar(*result.b_range.magnitude_cap);
  else
    synthesis["b_cap"] = nullptr;
  if (result.report.controllable) {
    synthesis["pinnable"] = {{"lo", store_scalar(result.report.lo)},
                             {"hi", store_scalar(result.report.hi)},
                             {"zero_excluded", result.report.zero_excluded}};
  }
  sink.write("strategy.json",
             strategy_file_json(players, controller + 1, probs, synthesis).dump(2) + "\n");
  return manifest;
}

template <typename T>
Manifest analyze_impl(const nlohmann::json& config, const std::string& out_dir) {
  Manifest manifest{"analyze", config, {}, {}};
  OutputSink sink(out_dir, manifest);

  ResolvedGame<T> rg = game_from_spec<T>(need(config, "game"));
  StateSpace space(rg.game.num_players());
  const int players = space.num_players();
  auto profile = strategies_from_config<T>(need(config, "strategies"), space);
  const std::size_t initial =
      parse_state_label(need(config, "initial").get<std::string>(), players);

  auto m = build_transition_matrix(profile, space);
  auto dist = stationary(m, initial);
  const bool ergodic = dist.irreducible && dist.aperiodic;

  std::ostringstream out;
  out << "states:";
  for (std::size_t s = 0; s < space.size(); ++s)
    out << " " << state_label(space, s);
  out << "\nstationary distribution:";
  for (const T& p : dist.pi) out << " " << scalar_to_string(p);
  out << "\nunique stationary distribution: " << yes_no(dist.unique) << "\n";
  out << "irreducible: " << yes_no(dist.irreducible)
      << "   aperiodic: " << yes_no(dist.aperiodic)
      << "   ergodic: " << yes_no(ergodic) << "\n";

  nlohmann::json report;
  report["schema_version"] = kSchemaVersion;
  report["initial"] = need(config, "initial").get<std::string>();
  nlohmann::json states = nlohmann::json::array();
  for (std::size_t s = 0; s < space.size(); ++s)
    states.push_back(state_label(space, s));
  report["states"] = states;
  nlohmann::json pi = nlohmann::json::array();
  for (const T& p : dist.pi) pi.push_back(store_scalar(p));
  report["stationary"] = pi;
  report["unique"] = dist.unique;
  report["irreducible"] = dist.irreducible;
  report["aperiodic"] = dist.aperiodic;
  report["ergodic"] = ergodic;

  nlohmann::json per_player = nlohmann::json::array();
  for (int i = 0; i < players; ++i) {
    const T payoff = long_run_payoff(dist, rg.game.payoff_vector(i));
    const T access = access_fraction(dist.pi, space, i);
    out << "player " << i + 1 << ": long-run payoff " << scalar_to_string(payoff)
        << ", access fraction " << scalar_to_string(access);
    nlohmann::json entry;
    entry["player"] = i + 1;
    entry["payoff"] = store_scalar(payoff);
    entry["access_fraction"] = store_scalar(access);
    if (!rg.power_caps.empty()) {
      const double avg_power =
          rg.power_caps[static_cast<std::size_t>(i)] * to_double(access);
      out << ", average power " << format_real(avg_power) << " W";
      entry["average_power_W"] = format_real_roundtrip(avg_power);
    }
    out << "\n";
    per_player.push_back(std::move(entry));
  }

  if (players == 2) {
    for (int i = 0; i < players; ++i) {
      try {
        const T det = determinant_payoff(profile[0], profile[1],
                                         rg.game.payoff_vector(i), space);
        const T gap = abs_value(det - long_run_payoff(dist, rg.game.payoff_vector(i)));
        out << "determinant cross-check player " << i + 1 << ": "
            << scalar_to_string(det) << " (gap " << scalar_to_string(gap) << ")\n";
        per_player[static_cast<std::size_t>(i)]["determinant_payoff"] = store_scalar(det);
        per_player[static_cast<std::size_t>(i)]["determinant_gap"] = store_scalar(gap);
      } catch (const Degenerate&) {
        out << "determinant cross-check player " << i + 1
            << ": not available (no unique stationary distribution)\n";
        per_player[static_cast<std::size_t>(i)]["determinant_payoff"] = nullptr;
      }
    }
  }
  report["players"] = per_player;

  std::cout << out.str();
  sink.write("analysis.json", report.dump(2) + "\n");
  return manifest;
}

std::uint64_t need_u64(const nlohmann::json& config, const std::string& key) {
  const auto& v = need(config, key);
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
    throw InvalidInput("config: \"" + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace

Manifest run_synthesize(const nlohmann::json& config, const std::string& out_dir) {
  if (config.value("exact", false)) return synthesize_impl<Rational>(config, out_dir);
  return synthesize_impl<double>(config, out_dir);
}

Manifest run_analyze(const nlohmann::json& config, const std::string& out_dir) {
  if (config.value("exact", false)) return analyze_impl<Rational>(config, out_dir);
  return analyze_impl<double>(config, out_dir);
}

Manifest run_simulate(const nlohmann::json& config, const std::string& out_dir) {
  Manifest manifest{"simulate", config, {}, {}};
  OutputSink sink(out_dir, manifest);

  ResolvedGame<double> rg = game_from_spec<double>(need(config, "game"));
  StateSpace space(rg.game.num_players());
  auto profile = strategies_from_config<double>(need(config, "strategies"), space);

  SimConfig sc;
  sc.seed = need_u64(config, "seed");
  sc.rounds = need_u64(config, "rounds");
  sc.replications = need_u64(config, "replications");
  sc.trace_stride = need_u64(config, "stride");
  sc.initial_state = parse_state_label(need(config, "initial").get<std::string>(),
                                 space.num_players());
  sc.record_trace = need(config, "record_trace").get<bool>();
  sc.jobs = config.value("jobs", 1);

  SimResult res = simulate(rg.game, profile, space, sc);

  std::ostringstream out;
  out << "replications: " << sc.replications << ", rounds: " << sc.rounds
      << ", seed: " << sc.seed << "\n";
  for (const auto& s : res.summaries) {
    out << "replication " << s.replication << ": mean payoff";
    for (double v : s.mean_payoff) out << " " << format_real(v);
    out << ", access";
    for (double v : s.access_fraction) out << " " << format_real(v);
    out << "\n";
  }
  std::cout << out.str();

  sink.write("summary.csv", summary_csv(res.summaries, space));
  nlohmann::json semantic = config;
  semantic.erase("jobs");  // thread count never changes the results
  const std::string config_hash = hash_hex(fnv1a64(semantic.dump(2)));
  for (const auto& trace : res.traces) {
    const std::string base = "trace_" + std::to_string(trace.replication);
    sink.write(base + ".csv", trace_csv(trace, space.num_players()));
    nlohmann::json meta;
    meta["schema_version"] = kSchemaVersion;
    meta["seed"] = sc.seed;
    meta["replication"] = trace.replication;
    meta["config_fnv1a64"] = config_hash;
    sink.write(base + ".meta.json", meta.dump(2) + "\n");
  }
  return manifest;
}

namespace {

template <typename T>
Manifest sweep_impl(const nlohmann::json& config, const std::string& out_dir) {
  Manifest manifest{"sweep", config, {}, {}};
  OutputSink sink(out_dir, manifest);

  ResolvedGame<T> rg = game_from_spec<T>(need(config, "game"));
  StateSpace space(rg.game.num_players());
  if (space.num_players() != 2)
    throw InvalidInput("sweep: two-player games only");
  const int controller = need_player(config, "controller", 2) - 1;
  const int other = 1 - controller;
  const T target = load_scalar<T>(need(config, "target"), "target");
  auto b_grid = load_scalar_list<T>(need(config, "b_grid"), "b_grid");
  const std::size_t initial =
      parse_state_label(need(config, "initial").get<std::string>(), 2);

  const auto& opp_json = need(config, "opponents");
  if (!opp_json.is_array() || opp_json.empty())
    throw InvalidInput("config: \"opponents\" must be a non-empty array");
  std::vector<MemoryOneStrategy<T>> opponents;
  for (std::size_t i = 0; i < opp_json.size(); ++i) {
    auto probs = load_scalar_list<T>(opp_json[i], "opponents[" + std::to_string(i) + "]");
    opponents.push_back(make_strategy(other, std::move(probs), space));
  }

  std::optional<T> power_cap;
  if (config.contains("power_cap") && !config.at("power_cap").is_null())
    power_cap = load_scalar<T>(config.at("power_cap"), "power_cap");
  else if (!rg.power_caps.empty())
    power_cap = T(rg.power_caps[static_cast<std::size_t>(controller)]);

  SweepTable<T> table =
      access_sweep(rg.game, space, controller, target, b_grid, opponents, initial);
  for (const auto& [b, why] : table.skipped)
    std::cerr << "warning: skipped b = " << scalar_to_string(b) << ": " << why << "\n";
  if (table.b_values.empty())
    throw Infeasible("sweep: every grid point was infeasible for target " +
                     scalar_to_string(target));

  std::vector<std::string> header{"b"};
  for (const auto& label : table.opponents) header.push_back("access_" + label);
  if (power_cap)
    for (const auto& label : table.opponents) header.push_back("power_" + label);
  CsvBuilder csv(header);
  for (std::size_t r = 0; r < table.b_values.size(); ++r) {
    std::vector<std::string> row{scalar_to_string(table.b_values[r])};
    for (const T& a : table.access[r]) row.push_back(scalar_to_string(a));
    if (power_cap)
      for (const T& a : table.access[r])
        row.push_back(scalar_to_string(T(*power_cap * a)));
    csv.add_row(row);
  }

  std::ostringstream out;
  out << "controller: player " << controller + 1 << ", target "
      << scalar_to_string(target) << "\n";
  out << "opponents:\n";
  for (std::size_t c = 0; c < table.opponents.size(); ++c)
    out << "  [" << c + 1 << "] " << table.opponents[c] << "\n";
  out << "b";
  for (std::size_t c = 0; c < table.opponents.size(); ++c)
    out << "  access[" << c + 1 << "]";
  out << "\n";
  for (std::size_t r = 0; r < table.b_values.size(); ++r) {
    out << scalar_to_string(table.b_values[r]);
    for (const T& a : table.access[r]) out << "  " << scalar_to_string(a);
    out << "\n";
  }
  std::cout << out.str();

  sink.write("sweep.csv", csv.text());
  return manifest;
}

}  // namespace

Manifest run_sweep(const nlohmann::json& config, const std::string& out_dir) {
  if (config.value("exact", false)) return sweep_impl<Rational>(config, out_dir);
  return sweep_impl<double>(config, out_dir);
}

Manifest run_spectrum(const nlohmann::json& config, const std::string& out_dir) {
  Manifest manifest{"spectrum", config, {}, {}};
  OutputSink sink(out_dir, manifest);

  DownlinkScenario scenario = scenario_from_json_text(need(config, "scenario").dump());
  SpectrumGame game = build_game(scenario);
  const std::size_t n = scenario.providers.size();

  std::ostringstream out;
  out << "providers: " << n << ", bandwidth: " << format_real(scenario.bandwidth)
      << " Hz per user\n";

  CsvBuilder csv({"provider", "setting", "user", "lambda_W", "sinr"});
  double worst_dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& provider = scenario.providers[i];
    std::vector<double> full_budgets;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) full_budgets.push_back(scenario.providers[j].budget);
    const std::vector<double> zeros(full_budgets.size(), 0.0);

    for (const bool contended : {false, true}) {
      const auto& interferers = contended ? full_budgets : zeros;
      PowerAllocation alloc = maxmin_allocation(provider, interferers);
      const double rate =
          shannon_rate(scenario.bandwidth, provider.users.size(), alloc.sinr);
      out << "provider " << i + 1 << (contended ? " (all interferers on): " : " (alone): ")
          << "SINR " << format_real(alloc.sinr) << ", rate " << format_real(rate)
          << " bit/s\n";
      for (std::size_t u = 0; u < provider.users.size(); ++u) {
        const double check = user_sinr(provider, u, alloc.lambda[u], interferers);
        const double scale = alloc.sinr > 0 ? alloc.sinr : 1.0;
        const double dev = std::abs(check - alloc.sinr) / scale;
        if (dev > worst_dev) worst_dev = dev;
        csv.add_row({std::to_string(i + 1), contended ? "contended" : "solo",
                     std::to_string(u + 1), format_real(alloc.lambda[u]),
                     format_real(check)});
      }
    }
  }
  out << "equal-SINR check: worst relative deviation " << format_real(worst_dev)
      << (worst_dev <= 1e-9 ? " (PASS)" : " (FAIL)") << "\n";

  const auto& params = game.params;
  for (std::size_t i = 0; i < n; ++i) {
    out << "provider " << i + 1 << ": solo rate " << format_real(params.solo_rate[i]);
    if (n == 2) {
      out << ", discount theta " << format_real(params.theta[i]);
    } else {
      out << ", discount alpha1 " << format_real(params.alpha1[i]) << ", alpha2 "
          << format_real(params.alpha2[i]);
    }
    if (params.target_rate[i])
      out << ", pricing target rate " << format_real(*params.target_rate[i]) << " bit/s";
    out << "\n";
  }
  if (n == 3 && !params.alpha_symmetric)
    out << "note: single-interferer discounts depend on which provider interferes; "
           "alpha1 above is their mean\n";
  std::cout << out.str();

  nlohmann::json game_json;
  game_json["players"] = static_cast<int>(n);
  nlohmann::json payoff_rows = nlohmann::json::array();
  for (const auto& row : game.payoffs.per_player) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) r.push_back(format_real_roundtrip(v));
    payoff_rows.push_back(std::move(r));
  }
  game_json["payoffs"] = payoff_rows;
  nlohmann::json derived;
  derived["bandwidth_Hz"] = scenario.bandwidth;
  nlohmann::json caps = nlohmann::json::array();
  for (const auto& p : scenario.providers) caps.push_back(p.budget);
  derived["power_caps_W"] = caps;
  nlohmann::json solo = nlohmann::json::array();
  for (double v : params.solo_rate) solo.push_back(format_real_roundtrip(v));
  derived["solo_rate"] = solo;
  if (n == 2) {
    nlohmann::json th = nlohmann::json::array();
    for (double v : params.theta) th.push_back(format_real_roundtrip(v));
    derived["theta"] = th;
  } else {
    nlohmann::json a1 = nlohmann::json::array(), a2 = nlohmann::json::array();
    for (double v : params.alpha1) a1.push_back(format_real_roundtrip(v));
    for (double v : params.alpha2) a2.push_back(format_real_roundtrip(v));
    derived["alpha1"] = a1;
    derived["alpha2"] = a2;
    derived["alpha_symmetric"] = params.alpha_symmetric;
  }
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : params.target_rate) {
    if (t)
      targets.push_back(format_real_roundtrip(*t));
    else
      targets.push_back(nullptr);
  }
  derived["target_rate"] = targets;
  game_json["derived"] = derived;

  sink.write("game.json", game_json.dump(2) + "\n");
  sink.write("allocations.csv", csv.text());
  return manifest;
}

Manifest run_command(const std::string& command, const nlohmann::json& config,
                     const std::string& out_dir) {
  if (command == "synthesize") return run_synthesize(config, out_dir);
  if (command == "analyze") return run_analyze(config, out_dir);
  if (command == "simulate") return run_simulate(config, out_dir);
  if (command == "sweep") return run_sweep(config, out_dir);
  if (command == "spectrum") return run_spectrum(config, out_dir);
  throw InvalidInput("manifest names unknown command \"" + command + "\"");
}

}  // namespace zdgame::cli
