#include <fmt/format.h>

#include "commands.h"
#include "graphmatch/descriptors.h"
#include "graphmatch/fisher.h"
#include "graphmatch/gmm.h"
#include "manifest.h"

namespace graphmatch::cli {

namespace fs = std::filesystem;

void AddPreprocessOptions(CLI::App& cmd, PreprocessOptions& opts) {
  PreprocessConfig& c = opts.config;
  auto* world = cmd.add_option("--world", opts.world, "World bundle directory")
                    ->check(CLI::ExistingDirectory);
  auto* collection = cmd.add_option("--collection", opts.collection, "Descriptor collection")
                         ->check(CLI::ExistingFile);
  world->excludes(collection);
  cmd.add_option("--features-per-image", c.features_per_image,
                 "Descriptors sampled per image for GMM training")
      ->capture_default_str();
  cmd.add_option("--components", c.num_components, "GMM components")->capture_default_str();
  cmd.add_option("--em-iters", c.em_max_iters, "Maximum EM iterations")->capture_default_str();
  cmd.add_option("--em-tol", c.em_tol, "Relative log-likelihood tolerance")
      ->capture_default_str();
  cmd.add_option("--variance-floor", c.variance_floor,
                 "Variance floor relative to per-dimension data variance")
      ->capture_default_str();
  cmd.add_option("--encoder", opts.encoder, "Global vector encoder")
      ->check(CLI::IsMember({"fisher", "vlad"}))
      ->capture_default_str();
  cmd.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd.add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--out", opts.out, "Output directory")->required();
}

void RunPreprocess(const PreprocessOptions& opts, std::ostream& out) {
  if (opts.world.empty() && opts.collection.empty()) {
    throw PreconditionError("one of --world or --collection is required");
  }
  const fs::path collection_path =
      opts.collection.empty() ? opts.world / "collection.gmds" : opts.collection;

  PreprocessConfig cfg = opts.config;
  cfg.encoder = ParseEncoderKind(opts.encoder);
  cfg.num_threads = opts.threads;

  Preprocessed result;
  const double seconds = TimeSeconds([&] {
    const Collection collection = LoadCollection(collection_path);
    result = Preprocess(collection, cfg);
    fs::create_directories(opts.out);
    SaveGmmModel(result.gmm, opts.out / "gmm.json");
    WriteVectorStore(result.vectors, opts.out / "vectors.gmfv");
  });

  Manifest manifest;
  manifest.command = "preprocess";
  if (!opts.world.empty()) manifest.config["world"] = opts.world.string();
  if (!opts.collection.empty()) manifest.config["collection"] = opts.collection.string();
  manifest.config["features-per-image"] = cfg.features_per_image;
  manifest.config["components"] = cfg.num_components;
  manifest.config["em-iters"] = cfg.em_max_iters;
  manifest.config["em-tol"] = cfg.em_tol;
  manifest.config["variance-floor"] = cfg.variance_floor;
  manifest.config["encoder"] = opts.encoder;
  manifest.config["seed"] = cfg.seed;
  manifest.inputs.emplace_back("collection", collection_path);
  manifest.outputs = {opts.out / "gmm.json", opts.out / "vectors.gmfv"};
  WriteManifest(manifest, opts.out, seconds, opts.threads);

  out << fmt::format("images {} vector length {}\n", result.vectors.size(),
                     result.vectors.dim());
}

}  // namespace graphmatch::cli
