#pragma once

#include <string>

#include <json.hpp>

#include "manifest.hpp"

namespace zdgame::cli {

// Each command takes a fully resolved config (everything needed to re-run it)
// and an output directory; it prints its report to stdout, writes its output
// files, and returns the manifest entry describing the run. The caller writes
// manifest.json.
Manifest run_synthesize(const nlohmann::json& config, const std::string& out_dir);
Manifest run_analyze(const nlohmann::json& config, const std::string& out_dir);
Manifest run_simulate(const nlohmann::json& config, const std::string& out_dir);
Manifest run_sweep(const nlohmann::json& config, const std::string& out_dir);
Manifest run_spectrum(const nlohmann::json& config, const std::string& out_dir);

// Dispatch by stored command name (replay path).
Manifest run_command(const std::string& command, const nlohmann::json& config,
                     const std::string& out_dir);

}  // namespace zdgame::cli
