#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "commands.h"
#include "graphmatch/fisher.h"
#include "graphmatch/graph.h"
#include "graphmatch/metrics.h"
#include "graphmatch/prior.h"
#include "manifest.h"

namespace graphmatch::cli {

namespace fs = std::filesystem;

void AddReportOptions(CLI::App& cmd, ReportOptions& opts) {
  cmd.add_option("inputs", opts.inputs, "Run directories or metrics CSV files")
      ->required()
      ->check(CLI::ExistingPath);
  cmd.add_option("--world", opts.world, "World bundle for truth-based curves and statistics")
      ->check(CLI::ExistingDirectory);
  cmd.add_option("--vectors", opts.vectors, "Global vectors for prior statistics")
      ->check(CLI::ExistingFile);
  cmd.add_option("--bins", opts.bins, "Histogram bins for prior statistics")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--out", opts.out, "Output directory")->required();
}

namespace {

struct RunSummary {
  std::string label;
  fs::path metrics_path;
  std::vector<IterationRecord> records;
  std::uint64_t tested = 0;
  std::uint64_t matched = 0;
  std::map<Stage, std::pair<std::uint64_t, std::uint64_t>> stages;  // tested, matched

  double Efficiency() const { return static_cast<double>(matched) / static_cast<double>(tested); }
};

std::string OptionalNumber(std::optional<double> value) {
  return value ? fmt::format("{}", *value) : std::string();
}

RunSummary LoadRun(const fs::path& input) {
  RunSummary run;
  if (fs::is_directory(input)) {
    run.metrics_path = input / "metrics.csv";
    run.label = fs::absolute(input).lexically_normal().filename().string();
    if (run.label.empty()) run.label = fs::absolute(input).parent_path().filename().string();
  } else {
    run.metrics_path = input;
    run.label = input.filename() == "metrics.csv"
                    ? fs::absolute(input).parent_path().filename().string()
                    : input.stem().string();
  }
  run.records = ReadMetricsCsv(run.metrics_path);
  if (run.records.empty()) {
    throw DataError(fmt::format("{}: no metrics records", run.metrics_path.string()));
  }
  run.tested = run.records.back().cum_tested;
  run.matched = run.records.back().cum_matched;
  if (run.tested == 0) {
    throw DataError(fmt::format("{}: no tested pairs", run.metrics_path.string()));
  }
  for (const auto& r : run.records) {
    auto& [tested, matched] = run.stages[r.stage];
    tested += r.tested;
    matched += r.matched;
  }

  // The graph files of a run must account for every tested pair.
  const fs::path dir = run.metrics_path.parent_path();
  if (fs::exists(dir / "graph.txt") && fs::exists(dir / "tested_nonedges.txt")) {
    const std::size_t edges = ReadEdgeList(dir / "graph.txt").edges.size();
    const std::size_t nonedges = ReadPairList(dir / "tested_nonedges.txt").size();
    if (edges != run.matched || edges + nonedges != run.tested) {
      throw DataError(fmt::format(
          "{}: graph files hold {} edges and {} non-edges but metrics report {} matched of {}",
          dir.string(), edges, nonedges, run.matched, run.tested));
    }
  }
  return run;
}

std::ofstream OpenCsv(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  return out;
}

}  // namespace

void RunReport(const ReportOptions& opts, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<RunSummary> runs;
  for (const auto& input : opts.inputs) runs.push_back(LoadRun(input));
  std::stable_sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
    return a.Efficiency() > b.Efficiency();
  });

  std::optional<WorldBundle> world;
  if (!opts.world.empty()) world = LoadWorldBundle(opts.world);
  std::optional<double> truth_count;
  if (world) truth_count = static_cast<double>(world->truth_edges.size());

  fs::create_directories(opts.out);
  Manifest manifest;
  manifest.command = "report";
  std::vector<std::string> input_names;
  for (const auto& input : opts.inputs) input_names.push_back(input.string());
  manifest.config["inputs"] = input_names;
  for (const auto& run : runs) manifest.inputs.emplace_back(run.label, run.metrics_path);

  {
    auto csv = OpenCsv(opts.out / "summary.csv");
    csv << "run,tested,matched,efficiency,sampling_tested,sampling_efficiency,"
           "propagation_tested,propagation_efficiency,truth_fraction\n";
    for (const auto& run : runs) {
      auto stage = [&](Stage s) -> std::pair<std::uint64_t, std::optional<double>> {
        auto it = run.stages.find(s);
        if (it == run.stages.end() || it->second.first == 0) return {0, std::nullopt};
        return {it->second.first,
                static_cast<double>(it->second.second) / static_cast<double>(it->second.first)};
      };
      const auto [sampling_tested, sampling] = stage(Stage::kSampling);
      const auto [propagation_tested, propagation] = stage(Stage::kPropagation);
      std::optional<double> fraction;
      if (truth_count && *truth_count > 0) fraction = run.matched / *truth_count;
      csv << fmt::format("{},{},{},{},{},{},{},{},{}\n", run.label, run.tested, run.matched,
                         run.Efficiency(), sampling_tested, OptionalNumber(sampling),
                         propagation_tested, OptionalNumber(propagation),
                         OptionalNumber(fraction));
      out << fmt::format("{:<24} tested {:>9} matched {:>8} efficiency {:.4f}", run.label,
                         run.tested, run.matched, run.Efficiency());
      if (sampling) out << fmt::format(" sampling {:.4f}", *sampling);
      if (propagation) out << fmt::format(" propagation {:.4f}", *propagation);
      out << "\n";
    }
  }
  manifest.outputs.push_back(opts.out / "summary.csv");

  {
    auto csv = OpenCsv(opts.out / "curves.csv");
    csv << "run,iteration,stage,sim_time,cum_tested,cum_matched,fraction_of_truth\n";
    for (const auto& run : runs) {
      for (const auto& r : run.records) {
        std::optional<double> fraction;
        if (truth_count && *truth_count > 0) fraction = r.cum_matched / *truth_count;
        csv << fmt::format("{},{},{},{},{},{},{}\n", run.label, r.iteration, StageName(r.stage),
                           r.sim_time, r.cum_tested, r.cum_matched, OptionalNumber(fraction));
      }
    }
  }
  manifest.outputs.push_back(opts.out / "curves.csv");

  if (world) {
    manifest.config["world"] = opts.world.string();
    const MatchGraph truth = MatchGraph::FromEdges(world->collection.size(), world->truth_edges);
    const GraphDistanceStats stats = ComputeGraphDistanceStats(truth, world->truth_edges);
    auto csv = OpenCsv(opts.out / "graph_distance.csv");
    csv << "distance,edges,nonedges,edge_probability\n";
    std::map<std::uint32_t, bool> distances;
    for (const auto& [d, _] : stats.edge_counts) distances[d] = true;
    for (const auto& [d, _] : stats.nonedge_counts) distances[d] = true;
    auto count = [](const std::map<std::uint32_t, std::uint64_t>& m, std::uint32_t d) {
      auto it = m.find(d);
      return it == m.end() ? std::uint64_t{0} : it->second;
    };
    for (const auto& [d, _] : distances) {
      csv << fmt::format("{},{},{},{}\n", d, count(stats.edge_counts, d),
                         count(stats.nonedge_counts, d),
                         OptionalNumber(stats.EdgeProbability(d, d)));
    }
    const std::uint64_t unreachable = stats.unreachable_edges + stats.unreachable_nonedges;
    std::optional<double> p;
    if (unreachable > 0) p = static_cast<double>(stats.unreachable_edges) / unreachable;
    csv << fmt::format("unreachable,{},{},{}\n", stats.unreachable_edges,
                       stats.unreachable_nonedges, OptionalNumber(p));
    manifest.outputs.push_back(opts.out / "graph_distance.csv");
  }

  if (!opts.vectors.empty()) {
    if (!world) throw PreconditionError("prior statistics need --world for the truth edges");
    const VectorStore vectors = LoadVectorStore(opts.vectors);
    if (vectors.size() != world->collection.size()) {
      throw DataError(fmt::format("inconsistent number of images: vectors {} vs world {}",
                                  vectors.size(), world->collection.size()));
    }
    manifest.config["vectors"] = opts.vectors.string();
    manifest.config["bins"] = opts.bins;
    manifest.inputs.emplace_back("vectors", opts.vectors);
    const PriorStats stats = ComputePriorStats(BuildPriorIndex(vectors), world->truth_edges,
                                               opts.bins);
    WritePriorStatsCsv(stats, opts.out);
    manifest.outputs.push_back(opts.out / "prior_pdf.csv");
    manifest.outputs.push_back(opts.out / "prior_roc.csv");
    if (stats.auc) out << fmt::format("prior auc {:.4f}\n", *stats.auc);
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  WriteManifest(manifest, opts.out, seconds, 1);
}

}  // namespace graphmatch::cli
