#include "manifest.hpp"

#include <ctime>
#include <filesystem>

#include "zdgame/csv.hpp"
#include "zdgame/errors.hpp"

namespace zdgame::cli {

OutputSink::OutputSink(std::string dir, Manifest& manifest)
    : dir_(std::move(dir)), manifest_(manifest) {
  if (dir_.empty()) dir_ = ".";
  std::filesystem::create_directories(dir_);
}

std::string OutputSink::path_of(const std::string& name) const {
  return (std::filesystem::path(dir_) / name).string();
}

void OutputSink::write(const std::string& name, const std::string& content) {
  write_text_file(path_of(name), content);
  manifest_.outputs.emplace_back(name, hash_hex(fnv1a64(content)));
}

void record_input(Manifest& manifest, const std::string& path,
                  const std::string& content) {
  manifest.inputs.emplace_back(path, hash_hex(fnv1a64(content)));
}

void write_manifest(const std::string& dir, const Manifest& manifest) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["command"] = manifest.command;
  j["config"] = manifest.config;
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& [path, hash] : manifest.inputs)
    inputs.push_back({{"path", path}, {"fnv1a64", hash}});
  j["inputs"] = inputs;
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& [name, hash] : manifest.outputs)
    outputs.push_back({{"file", name}, {"fnv1a64", hash}});
  j["outputs"] = outputs;
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  j["timestamp"] = stamp;
  write_text_file((std::filesystem::path(dir.empty() ? "." : dir) / "manifest.json").string(),
                  j.dump(2) + "\n");
}

Manifest load_manifest(const std::string& path) {
  const std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + ": not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("command") || !j.contains("config"))
    throw InvalidInput(path + ": not a run manifest (missing command/config)");
  if (j.value("schema_version", 0) != kSchemaVersion)
    throw InvalidInput(path + ": unsupported schema_version");
  Manifest m;
  m.command = j["command"].get<std::string>();
  m.config = j["config"];
  if (j.contains("outputs") && j["outputs"].is_array()) {
    for (const auto& entry : j["outputs"]) {
      if (entry.is_object() && entry.contains("file") && entry.contains("fnv1a64"))
        m.outputs.emplace_back(entry["file"].get<std::string>(),
                               entry["fnv1a64"].get<std::string>());
    }
  }
  return m;
}

}  // namespace zdgame::cli
