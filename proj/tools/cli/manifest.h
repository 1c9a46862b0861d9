#ifndef GRAPHMATCH_TOOLS_MANIFEST_H_
#define GRAPHMATCH_TOOLS_MANIFEST_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace graphmatch::cli {

// Hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

// Everything needed to rerun a command. `config` holds the effective value of
// every option under its flag name, except --out, --threads and --config, so
// that manifests compare equal across output directories and thread counts.
// Wall time lives in a separate timing.json for the same reason.
struct Manifest {
  std::string command;
  std::string status = "ok";
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::filesystem::path>> inputs;
  std::vector<std::filesystem::path> outputs;
};

// Writes manifest.json and timing.json into `dir`.
void WriteManifest(const Manifest& manifest, const std::filesystem::path& dir,
                   double wall_seconds, int threads);

}  // namespace graphmatch::cli

#endif  // GRAPHMATCH_TOOLS_MANIFEST_H_
