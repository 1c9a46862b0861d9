#ifndef GRAPHMATCH_TOOLS_COMMANDS_H_
#define GRAPHMATCH_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphmatch/error.h"
#include "graphmatch/pipeline.h"
#include "graphmatch/sim.h"

namespace graphmatch::cli {

struct SimulateOptions {
  WorldConfig world;
  std::filesystem::path out;
};

struct PreprocessOptions {
  std::filesystem::path world;
  std::filesystem::path collection;
  std::string encoder = "fisher";
  PreprocessConfig config;
  int threads = 1;
  std::filesystem::path out;
};

struct DiscoverOptions {
  std::string strategy = "graphmatch";
  std::filesystem::path world;
  std::filesystem::path collection;
  std::filesystem::path truth;
  std::filesystem::path vectors;

  std::string verifier = "synthetic";
  double flip_noise = 0.0;
  std::uint32_t min_matches = 30;
  double ratio = 0.8;
  std::string verifier_command;
  int verifier_workers = 1;

  std::optional<std::uint32_t> nsi;
  std::optional<std::uint32_t> max_nn;
  std::optional<std::uint32_t> ntp;
  std::optional<std::uint32_t> mtfs;
  std::string triplet_ranking = "fisher_distance";
  bool disable_sampling = false;
  bool disable_propagation = false;
  double cost_per_test = 1.0;

  std::optional<std::uint64_t> budget;
  std::uint32_t retrieval_k = 40;
  std::uint32_t rounds = 4;
  std::uint64_t batch_size = 0;

  std::uint64_t seed = 0;
  int threads = 1;
  std::filesystem::path out;
};

struct ReportOptions {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path world;
  std::filesystem::path vectors;
  std::size_t bins = 50;
  std::filesystem::path out;
};

void AddSimulateOptions(CLI::App& cmd, SimulateOptions& opts);
void AddPreprocessOptions(CLI::App& cmd, PreprocessOptions& opts);
void AddDiscoverOptions(CLI::App& cmd, DiscoverOptions& opts);
void AddReportOptions(CLI::App& cmd, ReportOptions& opts);

void RunSimulate(const SimulateOptions& opts, std::ostream& out);
void RunPreprocess(const PreprocessOptions& opts, std::ostream& out);
void RunDiscover(const DiscoverOptions& opts, std::ostream& out);
void RunReport(const ReportOptions& opts, std::ostream& out);

// Seconds elapsed while running `body`.
double TimeSeconds(const std::function<void()>& body);

}  // namespace graphmatch::cli

#endif  // GRAPHMATCH_TOOLS_COMMANDS_H_
