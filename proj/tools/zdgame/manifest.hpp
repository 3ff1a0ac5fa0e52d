#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace zdgame::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// Record of one command run: the fully resolved config plus hashes of every
// input read and every output written. Re-running the stored config must
// reproduce the outputs byte for byte.
struct Manifest {
  std::string command;
  nlohmann::json config;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, fnv1a64
  std::vector<std::pair<std::string, std::string>> outputs;  // name, fnv1a64
};

// Writes `content` under the run directory and records it in the manifest.
class OutputSink {
 public:
  OutputSink(std::string dir, Manifest& manifest);
  void write(const std::string& name, const std::string& content);
  std::string path_of(const std::string& name) const;

 private:
  std::string dir_;
  Manifest& manifest_;
};

void record_input(Manifest& manifest, const std::string& path,
                  const std::string& content);

// Serializes the manifest (with a timestamp) as manifest.json in `dir`.
void write_manifest(const std::string& dir, const Manifest& manifest);

Manifest load_manifest(const std::string& path);

}  // namespace zdgame::cli
