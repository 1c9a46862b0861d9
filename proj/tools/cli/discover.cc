#include <chrono>
#include <memory>
#include <optional>

#include <fmt/format.h>

#include "commands.h"
#include "graphmatch/baselines.h"
#include "graphmatch/descriptors.h"
#include "graphmatch/engine.h"
#include "graphmatch/fisher.h"
#include "graphmatch/graph.h"
#include "graphmatch/metrics.h"
#include "graphmatch/prior.h"
#include "graphmatch/verify.h"
#include "manifest.h"

namespace graphmatch::cli {

namespace fs = std::filesystem;

void AddDiscoverOptions(CLI::App& cmd, DiscoverOptions& opts) {
  cmd.add_option("--strategy", opts.strategy, "Discovery strategy")
      ->check(CLI::IsMember({"graphmatch", "brute_force", "random", "query_expansion"}))
      ->capture_default_str();
  cmd.add_option("--world", opts.world, "World bundle supplying collection and truth")
      ->check(CLI::ExistingDirectory);
  cmd.add_option("--collection", opts.collection, "Descriptor collection")
      ->check(CLI::ExistingFile);
  cmd.add_option("--truth", opts.truth, "Ground-truth edge list for the synthetic verifier")
      ->check(CLI::ExistingFile);
  cmd.add_option("--vectors", opts.vectors, "Global vectors from preprocess")
      ->check(CLI::ExistingFile);

  cmd.add_option("--verifier", opts.verifier, "Pair verifier")
      ->check(CLI::IsMember({"synthetic", "descriptor_overlap", "external"}))
      ->capture_default_str();
  cmd.add_option("--flip-noise", opts.flip_noise, "Synthetic verifier error rate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd.add_option("--min-matches", opts.min_matches, "Inlier count needed for an edge")
      ->capture_default_str();
  cmd.add_option("--ratio", opts.ratio, "Descriptor ratio-test threshold")
      ->capture_default_str();
  cmd.add_option("--verifier-command", opts.verifier_command, "Shell command of an external verifier");
  cmd.add_option("--verifier-workers", opts.verifier_workers, "External verifier processes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  cmd.add_option("--nsi", opts.nsi, "Sampling iterations");
  cmd.add_option("--max-nn", opts.max_nn, "Neighbor cap per image");
  cmd.add_option("--ntp", opts.ntp, "Pairs propagated per edge side");
  cmd.add_option("--mtfs", opts.mtfs, "Sampling budget per image");
  cmd.add_option("--triplet-ranking", opts.triplet_ranking, "Propagation ranking")
      ->check(CLI::IsMember({"fisher_distance", "inlier_ratio"}))
      ->capture_default_str();
  auto* no_sampling = cmd.add_flag("--disable-sampling", opts.disable_sampling,
                                   "Propagate only, after one seeding sampling pass");
  auto* no_propagation =
      cmd.add_flag("--disable-propagation", opts.disable_propagation, "Sample only");
  no_sampling->excludes(no_propagation);
  cmd.add_option("--cost-per-test", opts.cost_per_test, "Simulated seconds per verification")
      ->capture_default_str();

  cmd.add_option("--budget", opts.budget, "Pairs tested by the random baseline");
  cmd.add_option("--retrieval-k", opts.retrieval_k, "Neighbors retrieved per image")
      ->capture_default_str();
  cmd.add_option("--rounds", opts.rounds, "Query expansion rounds")->capture_default_str();
  cmd.add_option("--batch-size", opts.batch_size, "Pairs per random baseline batch, 0 for N")
      ->capture_default_str();

  cmd.add_option("--seed", opts.seed, "Random seed")->capture_default_str();
  cmd.add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--out", opts.out, "Output directory")->required();
}

namespace {

struct Inputs {
  std::optional<Collection> collection;
  std::optional<std::vector<Edge>> truth;
  std::optional<VectorStore> vectors;
  std::size_t num_images = 0;
  std::vector<std::pair<std::string, fs::path>> files;
};

void CheckSize(std::optional<std::size_t>& n, std::size_t candidate, const char* source) {
  if (n && *n != candidate) {
    throw DataError(fmt::format("inconsistent number of images: {} has {}, expected {}",
                                source, candidate, *n));
  }
  n = candidate;
}

Inputs LoadInputs(const DiscoverOptions& opts) {
  fs::path collection_path = opts.collection;
  fs::path truth_path = opts.truth;
  if (!opts.world.empty()) {
    if (collection_path.empty()) collection_path = opts.world / "collection.gmds";
    if (truth_path.empty()) truth_path = opts.world / "truth_edges.txt";
  }

  Inputs in;
  std::optional<std::size_t> n;
  if (!collection_path.empty()) {
    in.collection = LoadCollection(collection_path);
    CheckSize(n, in.collection->size(), "collection");
    in.files.emplace_back("collection", collection_path);
  }
  if (!truth_path.empty()) {
    EdgeListFile truth = ReadEdgeList(truth_path);
    CheckSize(n, truth.num_vertices, "truth edge list");
    in.truth = std::move(truth.edges);
    in.files.emplace_back("truth", truth_path);
  }
  if (!opts.vectors.empty()) {
    in.vectors = LoadVectorStore(opts.vectors);
    CheckSize(n, in.vectors->size(), "vector store");
    in.files.emplace_back("vectors", opts.vectors);
  }
  if (!n) throw PreconditionError("no input given; use --world, --collection, --truth or --vectors");
  in.num_images = *n;
  return in;
}

std::unique_ptr<Verifier> BuildVerifier(const DiscoverOptions& opts, const Inputs& in) {
  VerifierConfig vc;
  vc.kind = ParseVerifierKind(opts.verifier);
  vc.min_matches = opts.min_matches;
  vc.ratio_threshold = opts.ratio;
  vc.flip_noise = opts.flip_noise;
  vc.seed = opts.seed;
  vc.command = opts.verifier_command;
  vc.num_workers = opts.verifier_workers;
  if (vc.kind == VerifierKind::kSynthetic && !in.truth) {
    throw PreconditionError("the synthetic verifier needs --truth or --world");
  }
  if (vc.kind == VerifierKind::kDescriptorOverlap && !in.collection) {
    throw PreconditionError("the descriptor_overlap verifier needs --collection or --world");
  }
  if (vc.kind == VerifierKind::kExternal && vc.command.empty()) {
    throw PreconditionError("the external verifier needs --verifier-command");
  }
  return MakeVerifier(vc, in.collection ? &*in.collection : nullptr,
                      in.truth ? &*in.truth : nullptr);
}

void WriteRunFiles(const RunResult& result, const fs::path& dir) {
  fs::create_directories(dir);
  WriteEdgeList(dir / "graph.txt", result.graph.num_vertices(), result.graph.SortedEdges());
  WritePairList(dir / "tested_nonedges.txt", result.graph.SortedNonEdges());
  WriteMetricsCsv(result.metrics, dir / "metrics.csv");
}

}  // namespace

void RunDiscover(const DiscoverOptions& opts, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Inputs in = LoadInputs(opts);
  const std::size_t n = in.num_images;

  Manifest manifest;
  manifest.command = "discover";
  auto& config = manifest.config;
  config["strategy"] = opts.strategy;
  if (!opts.world.empty()) config["world"] = opts.world.string();
  if (!opts.collection.empty()) config["collection"] = opts.collection.string();
  if (!opts.truth.empty()) config["truth"] = opts.truth.string();
  if (!opts.vectors.empty()) config["vectors"] = opts.vectors.string();
  config["verifier"] = opts.verifier;
  config["flip-noise"] = opts.flip_noise;
  config["min-matches"] = opts.min_matches;
  config["ratio"] = opts.ratio;
  if (!opts.verifier_command.empty()) config["verifier-command"] = opts.verifier_command;
  config["verifier-workers"] = opts.verifier_workers;

  if (opts.disable_sampling && opts.disable_propagation) {
    throw PreconditionError("--disable-sampling and --disable-propagation exclude each other");
  }
  const bool needs_prior = opts.strategy == "graphmatch" || opts.strategy == "query_expansion";
  std::optional<PriorIndex> prior;
  if (needs_prior) {
    if (!in.vectors) throw PreconditionError(fmt::format("{} needs --vectors", opts.strategy));
    prior = BuildPriorIndex(*in.vectors, PriorOptions{.num_threads = opts.threads});
  }

  std::unique_ptr<Verifier> verifier = BuildVerifier(opts, in);

  std::function<RunResult()> run;
  EngineConfig ec;
  BaselineConfig bc;
  std::vector<std::uint32_t> feature_counts;
  if (opts.strategy == "graphmatch") {
    ec = DefaultConfig(n);
    if (opts.nsi) ec.number_sample_iterations = *opts.nsi;
    if (opts.max_nn) ec.max_num_neighbors = *opts.max_nn;
    if (opts.ntp) ec.num_to_propagate = *opts.ntp;
    if (opts.mtfs) ec.max_tests_for_sampling = *opts.mtfs;
    ec.triplet_ranking = ParseTripletRanking(opts.triplet_ranking);
    ec.stage_mode = opts.disable_sampling      ? StageMode::kPropagationOnly
                    : opts.disable_propagation ? StageMode::kSamplingOnly
                                               : StageMode::kBoth;
    ec.cost_per_test = opts.cost_per_test;
    ec.seed = opts.seed;
    ec.num_threads = opts.threads;
    ec.Validate();
    if (ec.triplet_ranking == TripletRanking::kInlierRatio) {
      if (!in.collection) throw PreconditionError("inlier_ratio ranking needs --collection or --world");
      feature_counts = in.collection->FeatureCounts();
    }
    config["nsi"] = ec.number_sample_iterations;
    config["max-nn"] = ec.max_num_neighbors;
    config["ntp"] = ec.num_to_propagate;
    config["mtfs"] = ec.max_tests_for_sampling;
    config["triplet-ranking"] = opts.triplet_ranking;
    if (opts.disable_sampling) config["disable-sampling"] = true;
    if (opts.disable_propagation) config["disable-propagation"] = true;
    run = [&] { return RunGraphMatch(*prior, *verifier, ec, feature_counts); };
  } else {
    if (opts.disable_sampling || opts.disable_propagation) {
      throw PreconditionError("stage flags apply to the graphmatch strategy only");
    }
    bc.budget = opts.budget.value_or(0);
    bc.retrieval_k = opts.retrieval_k;
    bc.expansion_rounds = opts.rounds;
    bc.batch_size = opts.batch_size;
    bc.seed = opts.seed;
    bc.cost_per_test = opts.cost_per_test;
    bc.num_threads = opts.threads;
    if (opts.strategy == "brute_force") {
      bc.kind = BaselineKind::kBruteForce;
      run = [&] { return RunBruteForce(n, *verifier, bc); };
    } else if (opts.strategy == "random") {
      if (!opts.budget) throw PreconditionError("the random strategy needs --budget");
      bc.kind = BaselineKind::kRandom;
      config["budget"] = bc.budget;
      config["batch-size"] = bc.batch_size;
      run = [&] { return RunRandom(n, *verifier, bc); };
    } else {
      bc.kind = BaselineKind::kQueryExpansion;
      config["retrieval-k"] = bc.retrieval_k;
      config["rounds"] = bc.expansion_rounds;
      run = [&] { return RunQueryExpansion(*prior, *verifier, bc); };
    }
  }
  config["cost-per-test"] = opts.cost_per_test;
  config["seed"] = opts.seed;
  manifest.inputs = in.files;

  auto finish = [&](const RunResult& result) {
    WriteRunFiles(result, opts.out);
    manifest.outputs = {opts.out / "graph.txt", opts.out / "tested_nonedges.txt",
                        opts.out / "metrics.csv"};
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    WriteManifest(manifest, opts.out, seconds, opts.threads);
  };

  RunResult result;
  try {
    result = run();
  } catch (const RunAborted& aborted) {
    manifest.status = "aborted";
    finish(aborted.partial());
    throw;
  }
  finish(result);

  const RunMetrics& m = result.metrics;
  out << fmt::format("tested {} matched {} efficiency {:.4f}\n", m.total_tested(),
                     m.total_matched(), m.Efficiency().value_or(0.0));
  for (Stage stage : {Stage::kSampling, Stage::kPropagation, Stage::kRetrieval, Stage::kExpansion}) {
    if (auto e = m.StageEfficiency(stage)) {
      out << fmt::format("  {} tested {} efficiency {:.4f}\n", StageName(stage),
                         m.StageTested(stage), *e);
    }
  }
  if (opts.strategy == "query_expansion") {
    out << "  note: retrieval ranks by global-vector distance in place of a vocabulary tree\n";
  }
}

}  // namespace graphmatch::cli
