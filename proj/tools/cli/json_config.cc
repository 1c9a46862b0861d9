#include "json_config.h"

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace graphmatch::cli {

using nlohmann::json;

namespace {

std::string ScalarText(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  return value.dump();
}

}  // namespace

void ApplyJsonConfig(CLI::App& cmd, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw CLI::ConversionError(path.string() + " is not valid JSON: " + e.what());
  }
  if (root.is_object() && root.contains("config") && root["config"].is_object()) {
    root = root["config"];
  }
  if (!root.is_object()) throw CLI::ConversionError(path.string() + " must hold a JSON object");

  for (const auto& [key, value] : root.items()) {
    CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (opt == nullptr) opt = cmd.get_option_no_throw(key);
    if (opt == nullptr || key == "config") {
      throw CLI::ValidationError(path.string() + ": unknown option '" + key + "'");
    }
    if (opt->count() > 0 || value.is_null()) continue;

    std::vector<std::string> inputs;
    if (value.is_array()) {
      for (const auto& v : value) inputs.push_back(ScalarText(v));
    } else {
      inputs.push_back(ScalarText(value));
    }
    for (const auto& input : inputs) opt->add_result(input);
    opt->run_callback();
  }
}

}  // namespace graphmatch::cli
