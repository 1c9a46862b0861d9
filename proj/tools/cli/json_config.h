#ifndef GRAPHMATCH_TOOLS_JSON_CONFIG_H_
#define GRAPHMATCH_TOOLS_JSON_CONFIG_H_

#include <filesystem>

#include <CLI11.hpp>

namespace graphmatch::cli {

// Fills options of `cmd` that were not given on the command line from a flat
// JSON object keyed by long flag names without the leading dashes. A run
// manifest is accepted too; its "config" object is used. Unknown keys and
// malformed files raise CLI parse errors.
void ApplyJsonConfig(CLI::App& cmd, const std::filesystem::path& path);

}  // namespace graphmatch::cli

#endif  // GRAPHMATCH_TOOLS_JSON_CONFIG_H_
