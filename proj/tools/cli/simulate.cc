#include <fmt/format.h>

#include "commands.h"
#include "manifest.h"

namespace graphmatch::cli {

namespace fs = std::filesystem;

void AddSimulateOptions(CLI::App& cmd, SimulateOptions& opts) {
  WorldConfig& w = opts.world;
  cmd.add_option("--n", w.num_images, "Number of images")->capture_default_str();
  cmd.add_option("--clusters", w.clusters, "Number of scene clusters")->capture_default_str();
  cmd.add_option("--spread", w.cluster_spread, "Cluster standard deviation")
      ->capture_default_str();
  cmd.add_option("--link-radius", w.link_radius, "Camera distance that implies an edge")
      ->capture_default_str();
  cmd.add_option("--dim", w.descriptor_dim, "Local descriptor dimension")->capture_default_str();
  cmd.add_option("--features", w.features_per_image, "Local features per image")
      ->capture_default_str();
  cmd.add_option("--noise", w.descriptor_noise, "Per-observation descriptor noise")
      ->capture_default_str();
  cmd.add_option("--landmarks", w.landmarks_per_cluster, "Landmarks per cluster")
      ->capture_default_str();
  cmd.add_option("--appearance-scale", w.appearance_scale,
                 "Weight of position in landmark appearance")
      ->capture_default_str();
  cmd.add_option("--seed", w.seed, "Random seed")->capture_default_str();
  cmd.add_option("--out", opts.out, "Output bundle directory")->required();
}

void RunSimulate(const SimulateOptions& opts, std::ostream& out) {
  opts.world.Validate();
  SyntheticWorld world;
  const double seconds = TimeSeconds([&] {
    world = GenerateWorld(opts.world);
    fs::create_directories(opts.out);
    WriteWorldBundle(world, opts.out);
  });

  const WorldConfig& w = opts.world;
  Manifest manifest;
  manifest.command = "simulate";
  manifest.config = {{"n", w.num_images},
                     {"clusters", w.clusters},
                     {"spread", w.cluster_spread},
                     {"link-radius", w.link_radius},
                     {"dim", w.descriptor_dim},
                     {"features", w.features_per_image},
                     {"noise", w.descriptor_noise},
                     {"landmarks", w.landmarks_per_cluster},
                     {"appearance-scale", w.appearance_scale},
                     {"seed", w.seed}};
  for (const char* name : {"collection.gmds", "truth_edges.txt", "world.json"}) {
    manifest.outputs.push_back(opts.out / name);
  }
  WriteManifest(manifest, opts.out, seconds, 1);

  out << fmt::format("images {} edges {} density {:.6f}\n", world.positions.size(),
                     world.truth_edges.size(), world.density);
}

}  // namespace graphmatch::cli
