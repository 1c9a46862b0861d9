#include "cli.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "commands.h"
#include "graphmatch/engine.h"
#include "json_config.h"

namespace graphmatch::cli {

double TimeSeconds(const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

namespace {

void AddConfigOption(CLI::App& cmd, std::filesystem::path& path) {
  cmd.add_option("--config", path,
                 "JSON file of option values; flags on the command line take precedence")
      ->check(CLI::ExistingFile);
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Approximate matching-graph discovery for image collections", "graphmatch");
  app.require_subcommand(1);
  app.set_version_flag("--version", "graphmatch 0.1.0");

  const int default_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  SimulateOptions simulate;
  PreprocessOptions preprocess;
  preprocess.threads = default_threads;
  DiscoverOptions discover;
  discover.threads = default_threads;
  ReportOptions report;

  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic world bundle");
  AddSimulateOptions(*simulate_cmd, simulate);
  auto* preprocess_cmd =
      app.add_subcommand("preprocess", "Train the GMM and encode global image vectors");
  AddPreprocessOptions(*preprocess_cmd, preprocess);
  auto* discover_cmd = app.add_subcommand("discover", "Discover matching-graph edges");
  AddDiscoverOptions(*discover_cmd, discover);
  auto* report_cmd = app.add_subcommand("report", "Summarize runs into plot-ready CSV files");
  AddReportOptions(*report_cmd, report);
  std::array<std::filesystem::path, 4> configs;
  const std::array<CLI::App*, 4> commands = {simulate_cmd, preprocess_cmd, discover_cmd,
                                             report_cmd};
  for (std::size_t i = 0; i < commands.size(); ++i) AddConfigOption(*commands[i], configs[i]);

  try {
    app.parse(argc, argv);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (commands[i]->parsed() && !configs[i].empty()) ApplyJsonConfig(*commands[i], configs[i]);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate_cmd->parsed()) RunSimulate(simulate, out);
    if (preprocess_cmd->parsed()) RunPreprocess(preprocess, out);
    if (discover_cmd->parsed()) RunDiscover(discover, out);
    if (report_cmd->parsed()) RunReport(report, out);
  } catch (const RunAborted& e) {
    err << fmt::format("error: {} (partial results written)\n", e.what());
    return kExitData;
  } catch (const PreconditionError& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitData;
  }
  return kExitOk;
}

}  // namespace graphmatch::cli
