#include "zdgame/file_formats.hpp"

#include <json.hpp>

#include "zdgame/csv.hpp"
#include "zdgame/errors.hpp"
#include "zdgame/numeric.hpp"

namespace zdgame {

using nlohmann::json;

std::string state_label(const StateSpace& space, std::size_t state) {
  std::string label;
  for (int a : space.actions_of(state)) label += static_cast<char>('0' + a);
  return label;
}

template <typename T>
std::vector<T> parse_number_list(const std::string& text) {
  std::vector<T> values;
  for (const std::string& part : split(text, ','))
    values.push_back(parse_scalar<T>(part));
  return values;
}

template std::vector<double> parse_number_list<double>(const std::string&);
template std::vector<Rational> parse_number_list<Rational>(const std::string&);

namespace {

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw InvalidInput(std::string(what) + ": malformed JSON");
  return j;
}

double json_number(const json& j, const char* key, const char* ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw InvalidInput(std::string(ctx) + ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

SpectrumProvider provider_from_json(const json& j, int index) {
  const std::string ctx = "providers[" + std::to_string(index) + "]";
  SpectrumProvider p;
  p.budget = json_number(j, "budget", ctx.c_str());
  if (!j.contains("users") || !j["users"].is_array())
    throw InvalidInput(ctx + ": missing users array");
  for (std::size_t k = 0; k < j["users"].size(); ++k) {
    const json& uj = j["users"][k];
    const std::string uctx = ctx + ".users[" + std::to_string(k) + "]";
    SpectrumUser u;
    u.noise = json_number(uj, "noise", uctx.c_str());
    u.gain = json_number(uj, "gain", uctx.c_str());
    if (!uj.contains("cross_gains") || !uj["cross_gains"].is_array())
      throw InvalidInput(uctx + ": missing cross_gains array");
    for (const json& g : uj["cross_gains"]) {
      if (!g.is_number())
        throw InvalidInput(uctx + ".cross_gains: entries must be numbers");
      u.cross_gains.push_back(g.get<double>());
    }
    p.users.push_back(std::move(u));
  }
  if (j.contains("pricing")) {
    const json& pj = j["pricing"];
    const std::string pctx = ctx + ".pricing";
    PricingSpec ps;
    if (!pj.contains("utility") || !pj["utility"].is_string())
      throw InvalidInput(pctx + ": missing string field 'utility'");
    ps.utility = pj["utility"].get<std::string>();
    ps.param = json_number(pj, "param", pctx.c_str());
    ps.price = json_number(pj, "price", pctx.c_str());
    p.pricing = std::move(ps);
  }
  return p;
}

template <typename T>
T payoff_from_json(const json& v) {
  if (v.is_string()) return parse_scalar<T>(v.get<std::string>());
  if (v.is_number_integer()) return T(v.get<long long>());
  if (v.is_number()) {
    if constexpr (is_exact_v<T>)
      throw InvalidInput(
          "exact payoffs must be written as strings (e.g. \"2/3\") or integers");
    else
      return v.get<double>();
  }
  throw InvalidInput("payoff entries must be numbers or strings");
}

}  // namespace

DownlinkScenario scenario_from_json_text(const std::string& text) {
  json j = parse_json(text, "scenario");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != 1)
    throw InvalidInput("scenario: schema_version must be 1");
  if (!j.contains("units") || !j["units"].is_object() ||
      j["units"].value("power", "") != "W" ||
      j["units"].value("bandwidth", "") != "Hz")
    throw InvalidInput(
        "scenario: units must declare {\"power\": \"W\", \"bandwidth\": \"Hz\"}");
  if (!j.contains("providers") || !j["providers"].is_array())
    throw InvalidInput("scenario: missing providers array");
  DownlinkScenario s;
  s.bandwidth = json_number(j, "bandwidth", "scenario");
  for (std::size_t i = 0; i < j["providers"].size(); ++i)
    s.providers.push_back(
        provider_from_json(j["providers"][i], static_cast<int>(i)));
  validate_scenario(s);
  return s;
}

std::string scenario_to_json_text(const DownlinkScenario& scenario) {
  json providers = json::array();
  for (const SpectrumProvider& p : scenario.providers) {
    json users = json::array();
    for (const SpectrumUser& u : p.users)
      users.push_back({{"noise", u.noise},
                       {"gain", u.gain},
                       {"cross_gains", u.cross_gains}});
    json pj{{"budget", p.budget}, {"users", users}};
    if (p.pricing)
      pj["pricing"] = {{"utility", p.pricing->utility},
                       {"param", p.pricing->param},
                       {"price", p.pricing->price}};
    providers.push_back(pj);
  }
  json j{{"schema_version", 1},
         {"units", {{"power", "W"}, {"bandwidth", "Hz"}}},
         {"bandwidth", scenario.bandwidth},
         {"providers", providers}};
  return j.dump(2) + "\n";
}

DownlinkScenario load_scenario(const std::string& path) {
  try {
    return scenario_from_json_text(read_text_file(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

template <typename T>
PayoffMatrix<T> game_from_json_text(const std::string& text) {
  json j = parse_json(text, "game");
  if (!j.contains("players") || !j["players"].is_number_integer())
    throw InvalidInput("game: missing integer field 'players'");
  const int players = j["players"].get<int>();
  StateSpace space(players);
  if (!j.contains("payoffs") || !j["payoffs"].is_array() ||
      j["payoffs"].size() != static_cast<std::size_t>(players))
    throw InvalidInput("game: needs one payoff row per player");
  PayoffMatrix<T> game;
  for (const json& row : j["payoffs"]) {
    if (!row.is_array() || row.size() != space.size())
      throw InvalidInput("game: each payoff row needs " +
                         std::to_string(space.size()) + " entries");
    std::vector<T> values;
    for (const json& v : row) values.push_back(payoff_from_json<T>(v));
    game.per_player.push_back(std::move(values));
  }
  validate_payoffs(game, space);
  return game;
}

template <typename T>
std::string game_to_json_text(const PayoffMatrix<T>& game) {
  json rows = json::array();
  for (const auto& vec : game.per_player) {
    json row = json::array();
    for (const T& v : vec) row.push_back(scalar_to_string(v));
    rows.push_back(row);
  }
  return json{{"players", game.num_players()}, {"payoffs", rows}}.dump(2) + "\n";
}

template PayoffMatrix<double> game_from_json_text<double>(const std::string&);
template PayoffMatrix<Rational> game_from_json_text<Rational>(const std::string&);
template std::string game_to_json_text<double>(const PayoffMatrix<double>&);
template std::string game_to_json_text<Rational>(const PayoffMatrix<Rational>&);

std::string trace_csv(const Trace& trace, int players) {
  std::vector<std::string> header{"round", "state"};
  for (int p = 1; p <= players; ++p)
    header.push_back("payoff_" + std::to_string(p));
  for (int p = 1; p <= players; ++p)
    header.push_back("runmean_" + std::to_string(p));
  CsvBuilder csv(header);
  const std::size_t np = static_cast<std::size_t>(players);
  for (std::size_t r = 0; r < trace.round.size(); ++r) {
    std::vector<std::string> row;
    row.push_back(std::to_string(trace.round[r]));
    row.push_back(std::to_string(trace.state[r]));
    for (std::size_t p = 0; p < np; ++p)
      row.push_back(format_real(trace.payoff[r * np + p]));
    for (std::size_t p = 0; p < np; ++p)
      row.push_back(format_real(trace.running_mean[r * np + p]));
    csv.add_row(row);
  }
  return csv.text();
}

std::string summary_csv(const std::vector<ReplicationSummary>& summaries,
                        const StateSpace& space) {
  std::vector<std::string> header{"replication"};
  for (std::size_t s = 0; s < space.size(); ++s)
    header.push_back("freq_" + state_label(space, s));
  for (int p = 1; p <= space.num_players(); ++p)
    header.push_back("mean_payoff_" + std::to_string(p));
  for (int p = 1; p <= space.num_players(); ++p)
    header.push_back("access_fraction_" + std::to_string(p));
  CsvBuilder csv(header);
  for (const ReplicationSummary& s : summaries) {
    std::vector<std::string> row;
    row.push_back(std::to_string(s.replication));
    for (double f : s.state_fraction) row.push_back(format_real(f));
    for (double m : s.mean_payoff) row.push_back(format_real(m));
    for (double a : s.access_fraction) row.push_back(format_real(a));
    csv.add_row(row);
  }
  return csv.text();
}

}  // namespace zdgame
