#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "game_spec.hpp"
#include "manifest.hpp"
#include "zdgame/csv.hpp"
#include "zdgame/errors.hpp"
#include "zdgame/file_formats.hpp"
#include "zdgame/numeric.hpp"

namespace {

using nlohmann::json;
using namespace zdgame;
using namespace zdgame::cli;

// Comma-list flag text -> canonical string array for the resolved config.
json normalize_values(const std::string& text, bool exact, const char* what) {
  json arr = json::array();
  for (const std::string& part : split_list(text)) {
    if (part.empty())
      throw InvalidInput(std::string(what) + ": empty value in list \"" + text + "\"");
    if (exact)
      arr.push_back(store_scalar(parse_rational(part)));
    else
      arr.push_back(store_scalar(parse_real(part)));
  }
  return arr;
}

json broadcast(json arr, std::size_t n, const char* what) {
  if (arr.size() == n) return arr;
  if (arr.size() == 1) {
    json out = json::array();
    for (std::size_t i = 0; i < n; ++i) out.push_back(arr[0]);
    return out;
  }
  throw InvalidInput(std::string(what) + ": expected 1 or " + std::to_string(n) +
                     " comma-separated values");
}

struct GameFlags {
  std::string rates, theta, alpha1, alpha2;
  std::string game_file, scenario_file, payoffs;

  void add_to(CLI::App* cmd, bool with_payoffs) {
    cmd->add_option("--R", rates,
                    "solo rates, comma separated (single value broadcasts)");
    cmd->add_option("--theta", theta, "two-provider contention discounts");
    cmd->add_option("--alpha1", alpha1, "three-provider one-interferer discounts");
    cmd->add_option("--alpha2", alpha2, "three-provider two-interferer discounts");
    cmd->add_option("--game", game_file, "payoff matrix JSON file");
    cmd->add_option("--scenario", scenario_file, "physical scenario JSON file");
    if (with_payoffs)
      cmd->add_option("--payoffs", payoffs,
                      "pinned player's payoff vector, comma separated");
  }

  // pinned_player > 0 allows the bare-vector form and assigns it that owner.
  json resolve(bool exact, Manifest& manifest, int pinned_player = 0) const {
    int sources = 0;
    if (!rates.empty() || !theta.empty() || !alpha1.empty() || !alpha2.empty())
      ++sources;
    if (!game_file.empty()) ++sources;
    if (!scenario_file.empty()) ++sources;
    if (!payoffs.empty()) ++sources;
    if (sources == 0)
      throw InvalidInput("no game given: use --R/--theta (or --alpha1/--alpha2), "
                         "--game, --scenario" +
                         std::string(pinned_player > 0 ? ", or --payoffs" : ""));
    if (sources > 1)
      throw InvalidInput("give exactly one game source (--R..., --game, "
                         "--scenario or --payoffs)");

    json spec;
    if (!payoffs.empty()) {
      json values = normalize_values(payoffs, exact, "--payoffs");
      std::size_t n = values.size();
      int players = 0;
      while (n > 1 && (n & 1) == 0) {
        n >>= 1;
        ++players;
      }
      if (n != 1 || players < 1 || players > 20)
        throw InvalidInput("--payoffs: length must be 2^players, got " +
                           std::to_string(values.size()));
      if (pinned_player < 1 || pinned_player > players)
        throw InvalidInput("--payoffs: pinned player " + std::to_string(pinned_player) +
                           " does not exist in a " + std::to_string(players) +
                           "-player game");
      spec["type"] = "pinned_vector";
      spec["players"] = players;
      spec["player"] = pinned_player;
      spec["values"] = values;
      return spec;
    }
    if (!game_file.empty()) {
      const std::string text = read_text_file(game_file);
      record_input(manifest, game_file, text);
      json rows = json::array();
      int players = 0;
      if (exact) {
        auto pm = game_from_json_text<Rational>(text);
        players = pm.num_players();
        for (const auto& row : pm.per_player) rows.push_back(store_scalar_list(row));
      } else {
        auto pm = game_from_json_text<double>(text);
        players = pm.num_players();
        for (const auto& row : pm.per_player) rows.push_back(store_scalar_list(row));
      }
      spec["type"] = "payoffs";
      spec["players"] = players;
      spec["payoffs"] = rows;
      return spec;
    }
    if (!scenario_file.empty()) {
      const std::string text = read_text_file(scenario_file);
      record_input(manifest, scenario_file, text);
      scenario_from_json_text(text);  // validate before embedding
      spec["type"] = "scenario";
      spec["scenario"] = json::parse(text);
      return spec;
    }
    if (rates.empty())
      throw InvalidInput("--theta/--alpha1/--alpha2 need --R as well");
    json r = normalize_values(rates, exact, "--R");
    if (!theta.empty()) {
      if (!alpha1.empty() || !alpha2.empty())
        throw InvalidInput("--theta and --alpha1/--alpha2 are mutually exclusive");
      spec["type"] = "two_provider";
      spec["R"] = broadcast(r, 2, "--R");
      spec["theta"] = broadcast(normalize_values(theta, exact, "--theta"), 2, "--theta");
      return spec;
    }
    if (alpha1.empty() || alpha2.empty())
      throw InvalidInput("--R needs --theta (two providers) or both --alpha1 and "
                         "--alpha2 (three providers)");
    spec["type"] = "three_provider";
    spec["R"] = broadcast(r, 3, "--R");
    spec["alpha1"] = broadcast(normalize_values(alpha1, exact, "--alpha1"), 3, "--alpha1");
    spec["alpha2"] = broadcast(normalize_values(alpha2, exact, "--alpha2"), 3, "--alpha2");
    return spec;
  }
};

int spec_players(const json& spec) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "two_provider") return 2;
  if (type == "three_provider") return 3;
  if (type == "scenario")
    return static_cast<int>(spec.at("scenario").at("providers").size());
  return spec.at("players").get<int>();
}

// One --strategy entry: a comma list of 2^N probabilities or @file.
json resolve_strategy_entry(const std::string& entry, bool exact, int players,
                            int expected_owner, Manifest& manifest) {
  if (!entry.empty() && entry[0] == '@') {
    const std::string path = entry.substr(1);
    const std::string text = read_text_file(path);
    record_input(manifest, path, text);
    StrategyFile f = parse_strategy_file(text, path);
    if (f.players != players)
      throw InvalidInput(path + ": strategy is for a " + std::to_string(f.players) +
                         "-player game, this game has " + std::to_string(players));
    if (f.owner != expected_owner)
      throw InvalidInput(path + ": strategy owner is player " +
                         std::to_string(f.owner) + ", expected player " +
                         std::to_string(expected_owner));
    json out = json::array();
    for (const auto& p : f.probs) {
      if (p.is_string())
        out.push_back(exact ? store_scalar(parse_rational(p.get<std::string>()))
                            : store_scalar(parse_real(p.get<std::string>())));
      else if (p.is_number() && !exact)
        out.push_back(store_scalar(p.get<double>()));
      else
        throw InvalidInput(path + ": probs must be numeric strings" +
                           std::string(exact ? " in exact mode" : " or numbers"));
    }
    return out;
  }
  return normalize_values(entry, exact, "--strategy");
}

json resolve_strategies(const std::vector<std::string>& entries, bool exact,
                        int players, Manifest& manifest) {
  if (static_cast<int>(entries.size()) != players)
    throw InvalidInput("need one --strategy per player (" + std::to_string(players) +
                       "), got " + std::to_string(entries.size()));
  json arr = json::array();
  for (int i = 0; i < players; ++i)
    arr.push_back(resolve_strategy_entry(entries[static_cast<std::size_t>(i)], exact,
                                         players, i + 1, manifest));
  return arr;
}

std::string default_out_dir() {
  const char* env = std::getenv("ZDGAME_OUT_DIR");
  return env && *env ? env : ".";
}

void finish_run(const std::string& out_dir, const Manifest& manifest) {
  write_manifest(out_dir, manifest);
  std::cout << "outputs in " << out_dir << ":";
  for (const auto& [name, hash] : manifest.outputs) {
    std::cout << " " << name;
    (void)hash;
  }
  std::cout << " manifest.json\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-determinant strategies for repeated spectrum-access games"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // --- synthesize ---------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synthesize", "build a strategy that pins a player's long-run payoff");
  GameFlags synth_game;
  synth_game.add_to(synth, true);
  int synth_controller = 1;
  int synth_pinned = 0;
  std::string synth_mode = "own", synth_target, synth_b = "auto", synth_out;
  bool synth_exact = false;
  synth->add_option("--controller,--player", synth_controller,
                    "player implementing the strategy (1-based)");
  synth->add_option("--mode", synth_mode, "own: pin own payoff; opponent: pin theirs")
      ->check(CLI::IsMember({"own", "opponent"}));
  synth->add_option("--pinned", synth_pinned,
                    "player whose payoff is pinned (only needed for --mode opponent "
                    "with 3+ players)");
  synth->add_option("--target", synth_target, "long-run payoff to pin")->required();
  synth->add_option("--b", synth_b, "slope b, or 'auto' for the midpoint");
  synth->add_flag("--exact", synth_exact, "rational arithmetic end to end");
  synth->add_option("--out", synth_out, "output directory");
  synth->callback([&] {
    const std::string out_dir = synth_out.empty() ? default_out_dir() : synth_out;
    Manifest inputs{"synthesize", {}, {}, {}};
    // Resolve pinned player before the game when --payoffs fixes the count.
    json game;
    int pinned = 0;
    if (!synth_game.payoffs.empty()) {
      // Infer the player count from the vector length to resolve the pin.
      const auto values = split_list(synth_game.payoffs);
      std::size_t n = values.size();
      int players = 0;
      while (n > 1 && (n & 1) == 0) {
        n >>= 1;
        ++players;
      }
      if (n != 1 || players < 1)
        throw InvalidInput("--payoffs: length must be 2^players, got " +
                           std::to_string(values.size()));
      pinned = synth_mode == "own"
                   ? synth_controller
                   : (synth_pinned > 0 ? synth_pinned
                                       : (players == 2 ? 3 - synth_controller : 0));
      if (pinned == 0)
        throw InvalidInput("--mode opponent with 3+ players needs --pinned");
      game = synth_game.resolve(synth_exact, inputs, pinned);
    } else {
      game = synth_game.resolve(synth_exact, inputs);
      const int players = spec_players(game);
      pinned = synth_mode == "own"
                   ? synth_controller
                   : (synth_pinned > 0 ? synth_pinned
                                       : (players == 2 ? 3 - synth_controller : 0));
      if (pinned == 0)
        throw InvalidInput("--mode opponent with 3+ players needs --pinned");
    }
    if (synth_mode == "own" && synth_pinned > 0 && synth_pinned != synth_controller)
      throw InvalidInput("--mode own pins the controller's payoff; drop --pinned");

    json config;
    config["exact"] = synth_exact;
    config["game"] = game;
    config["controller"] = synth_controller;
    config["mode"] = synth_mode;
    config["pinned_player"] = pinned;
    if (synth_b == "auto") {
      config["b"] = "auto";
    } else if (synth_exact) {
      config["b"] = store_scalar(parse_rational(synth_b));
    } else {
      config["b"] = store_scalar(parse_real(synth_b));
    }
    config["target"] = synth_exact ? store_scalar(parse_rational(synth_target))
                                   : store_scalar(parse_real(synth_target));
    Manifest m = run_synthesize(config, out_dir);
    m.inputs = inputs.inputs;
    finish_run(out_dir, m);
  });

  // --- analyze ------------------------------------------------------------
  auto* analyze = app.add_subcommand(
      "analyze", "exact long-run behavior of a strategy profile");
  GameFlags analyze_game;
  analyze_game.add_to(analyze, false);
  std::vector<std::string> analyze_strategies;
  std::string analyze_initial, analyze_out;
  bool analyze_exact = false;
  analyze->add_option("--strategy", analyze_strategies,
                      "one per player, in order: comma list of 2^N probabilities "
                      "or @strategy.json")
      ->required();
  analyze->add_option("--initial", analyze_initial,
                      "starting joint action, e.g. 11 (default: everyone accesses)");
  analyze->add_flag("--exact", analyze_exact, "rational arithmetic end to end");
  analyze->add_option("--out", analyze_out, "output directory");
  analyze->callback([&] {
    const std::string out_dir = analyze_out.empty() ? default_out_dir() : analyze_out;
    Manifest inputs{"analyze", {}, {}, {}};
    json game = analyze_game.resolve(analyze_exact, inputs);
    const int players = spec_players(game);
    json config;
    config["exact"] = analyze_exact;
    config["game"] = game;
    config["strategies"] =
        resolve_strategies(analyze_strategies, analyze_exact, players, inputs);
    config["initial"] = analyze_initial.empty()
                            ? std::string(static_cast<std::size_t>(players), '1')
                            : analyze_initial;
    Manifest m = run_analyze(config, out_dir);
    m.inputs = inputs.inputs;
    finish_run(out_dir, m);
  });

  // --- simulate -----------------------------------------------------------
  auto* sim = app.add_subcommand(
      "simulate", "Monte Carlo round playout with traces and summaries");
  GameFlags sim_game;
  sim_game.add_to(sim, false);
  std::string sim_config_file, sim_initial, sim_out;
  std::vector<std::string> sim_strategies;
  std::uint64_t sim_rounds = 1000, sim_reps = 1, sim_seed = 0, sim_stride = 1;
  int sim_jobs = 1;
  bool sim_no_trace = false;
  auto* sim_config_opt =
      sim->add_option("--config", sim_config_file, "simulation config JSON");
  auto* sim_strategy_opt = sim->add_option("--strategy", sim_strategies,
                                           "one per player (overrides config file)");
  auto* sim_rounds_opt = sim->add_option("--rounds", sim_rounds, "rounds per replication");
  auto* sim_reps_opt = sim->add_option("--reps", sim_reps, "independent replications");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "base seed");
  auto* sim_stride_opt =
      sim->add_option("--stride", sim_stride, "record every k-th round in traces");
  auto* sim_initial_opt = sim->add_option("--initial", sim_initial, "starting joint action");
  auto* sim_jobs_opt = sim->add_option("--jobs", sim_jobs,
                                       "worker threads (0 = runtime default); never "
                                       "changes the results");
  auto* sim_no_trace_opt =
      sim->add_flag("--no-trace", sim_no_trace, "skip per-round trace files");
  sim->add_option("--out", sim_out, "output directory");
  sim->callback([&] {
    const std::string out_dir = sim_out.empty() ? default_out_dir() : sim_out;
    Manifest inputs{"simulate", {}, {}, {}};
    json config = json::object();
    if (sim_config_opt->count()) {
      const std::string text = read_text_file(sim_config_file);
      record_input(inputs, sim_config_file, text);
      try {
        config = json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(sim_config_file + ": not valid JSON: " + e.what());
      }
      if (!config.is_object())
        throw InvalidInput(sim_config_file + ": expected a JSON object");
      config.erase("exact");
    }
    bool game_flags_given = !sim_game.rates.empty() || !sim_game.game_file.empty() ||
                            !sim_game.scenario_file.empty();
    if (game_flags_given) config["game"] = sim_game.resolve(false, inputs);
    if (!config.contains("game"))
      throw InvalidInput("simulate: no game given (flags or --config file)");
    const int players = spec_players(config["game"]);
    if (sim_strategy_opt->count())
      config["strategies"] = resolve_strategies(sim_strategies, false, players, inputs);
    if (!config.contains("strategies"))
      throw InvalidInput("simulate: no strategies given (flags or --config file)");
    if (sim_rounds_opt->count() || !config.contains("rounds"))
      config["rounds"] = sim_rounds;
    if (sim_reps_opt->count() || !config.contains("replications"))
      config["replications"] = sim_reps;
    if (sim_seed_opt->count() || !config.contains("seed")) config["seed"] = sim_seed;
    if (sim_stride_opt->count() || !config.contains("stride"))
      config["stride"] = sim_stride;
    if (sim_initial_opt->count() || !config.contains("initial"))
      config["initial"] = sim_initial_opt->count()
                              ? sim_initial
                              : std::string(static_cast<std::size_t>(players), '1');
    if (sim_no_trace_opt->count() || !config.contains("record_trace"))
      config["record_trace"] = !sim_no_trace;
    if (sim_jobs_opt->count() || !config.contains("jobs")) config["jobs"] = sim_jobs;
    Manifest m = run_simulate(config, out_dir);
    m.inputs = inputs.inputs;
    finish_run(out_dir, m);
  });

  // --- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "access-fraction curves of a pinning controller across slopes b");
  GameFlags sweep_game;
  sweep_game.add_to(sweep, false);
  int sweep_controller = 1;
  std::string sweep_target, sweep_grid, sweep_initial, sweep_power_cap, sweep_out;
  std::vector<std::string> sweep_opponents;
  bool sweep_exact = false;
  sweep->add_option("--controller,--player", sweep_controller, "pinning player (1-based)");
  sweep->add_option("--target", sweep_target, "controller's pinned payoff")->required();
  sweep->add_option("--b-grid", sweep_grid,
                    "slopes to try: comma list or start:stop:step")
      ->required();
  sweep->add_option("--opponent", sweep_opponents,
                    "opponent strategy (repeatable): comma list or @file")
      ->required();
  sweep->add_option("--initial", sweep_initial, "starting joint action");
  sweep->add_option("--power-cap", sweep_power_cap,
                    "controller's transmit power cap, for average-power columns");
  sweep->add_flag("--exact", sweep_exact, "rational arithmetic end to end");
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->callback([&] {
    const std::string out_dir = sweep_out.empty() ? default_out_dir() : sweep_out;
    Manifest inputs{"sweep", {}, {}, {}};
    json game = sweep_game.resolve(sweep_exact, inputs);
    const int players = spec_players(game);
    if (players != 2) throw InvalidInput("sweep: two-player games only");
    json config;
    config["exact"] = sweep_exact;
    config["game"] = game;
    config["controller"] = sweep_controller;
    config["target"] = sweep_exact ? store_scalar(parse_rational(sweep_target))
                                   : store_scalar(parse_real(sweep_target));
    if (sweep_exact)
      config["b_grid"] = store_scalar_list(resolve_grid<Rational>(sweep_grid));
    else
      config["b_grid"] = store_scalar_list(resolve_grid<double>(sweep_grid));
    json opps = json::array();
    const int other = 3 - sweep_controller;
    for (const auto& entry : sweep_opponents)
      opps.push_back(resolve_strategy_entry(entry, sweep_exact, 2, other, inputs));
    config["opponents"] = opps;
    config["initial"] = sweep_initial.empty() ? "11" : sweep_initial;
    if (!sweep_power_cap.empty())
      config["power_cap"] = sweep_exact ? store_scalar(parse_rational(sweep_power_cap))
                                        : store_scalar(parse_real(sweep_power_cap));
    Manifest m = run_sweep(config, out_dir);
    m.inputs = inputs.inputs;
    finish_run(out_dir, m);
  });

  // --- spectrum -------------------------------------------------------------
  auto* spectrum = app.add_subcommand(
      "spectrum", "reduce a physical downlink scenario to its access game");
  std::string spectrum_scenario, spectrum_out;
  spectrum->add_option("--scenario", spectrum_scenario, "scenario JSON file")->required();
  spectrum->add_option("--out", spectrum_out, "output directory");
  spectrum->callback([&] {
    const std::string out_dir = spectrum_out.empty() ? default_out_dir() : spectrum_out;
    Manifest inputs{"spectrum", {}, {}, {}};
    const std::string text = read_text_file(spectrum_scenario);
    record_input(inputs, spectrum_scenario, text);
    scenario_from_json_text(text);  // surface errors with the file's field paths
    json config;
    config["scenario"] = json::parse(text);
    Manifest m = run_spectrum(config, out_dir);
    m.inputs = inputs.inputs;
    finish_run(out_dir, m);
  });

  // --- replay ----------------------------------------------------------------
  auto* replay = app.add_subcommand(
      "replay", "re-run a recorded manifest and verify byte-identical outputs");
  std::string replay_manifest, replay_out;
  int replay_jobs = -1;
  replay->add_option("manifest", replay_manifest, "path to manifest.json")->required();
  replay->add_option("--jobs", replay_jobs, "thread override; results must not change");
  replay->add_option("--out", replay_out, "output directory");
  replay->callback([&] {
    const std::string out_dir = replay_out.empty() ? default_out_dir() : replay_out;
    Manifest original = load_manifest(replay_manifest);
    json config = original.config;
    if (replay_jobs >= 0 && config.contains("jobs")) config["jobs"] = replay_jobs;
    Manifest rerun = run_command(original.command, config, out_dir);
    write_manifest(out_dir, rerun);
    std::vector<std::string> mismatched;
    for (const auto& [name, hash] : original.outputs) {
      const auto it =
          std::find_if(rerun.outputs.begin(), rerun.outputs.end(),
                       [&](const auto& p) { return p.first == name; });
      if (it == rerun.outputs.end()) {
        std::cout << "replay: " << name << " was not produced\n";
        mismatched.push_back(name);
      } else if (it->second != hash) {
        std::cout << "replay: " << name << " DIFFERS (fnv1a64 " << hash << " -> "
                  << it->second << ")\n";
        mismatched.push_back(name);
      } else {
        std::cout << "replay: " << name << " reproduced (fnv1a64 " << hash << ")\n";
      }
    }
    if (!mismatched.empty()) {
      std::string names;
      for (const auto& n : mismatched) names += (names.empty() ? "" : ", ") + n;
      throw std::runtime_error("replay produced different bytes for: " + names);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const Degenerate& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
