#pragma once

#include <string>
#include <vector>

#include "zdgame/game_core.hpp"
#include "zdgame/sim.hpp"
#include "zdgame/spectrum.hpp"
#include "zdgame/state_space.hpp"

namespace zdgame {

// Joint action labels: state 1 of two players prints as "12".
std::string state_label(const StateSpace& space, std::size_t state);

// Comma-separated scalars; rationals like "2/3" pass through exactly.
template <typename T>
std::vector<T> parse_number_list(const std::string& text);

DownlinkScenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const DownlinkScenario& scenario);
DownlinkScenario load_scenario(const std::string& path);

// Explicit payoff matrices: {"players": N, "payoffs": [[...], ...]} with one
// row per player in canonical state order. Exact mode requires values written
// as strings or integers so nothing is silently rounded through a double.
template <typename T>
PayoffMatrix<T> game_from_json_text(const std::string& text);
template <typename T>
std::string game_to_json_text(const PayoffMatrix<T>& game);

std::string trace_csv(const Trace& trace, int players);
std::string summary_csv(const std::vector<ReplicationSummary>& summaries,
                        const StateSpace& space);

}  // namespace zdgame
