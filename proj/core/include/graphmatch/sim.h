#ifndef GRAPHMATCH_SIM_H_
#define GRAPHMATCH_SIM_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graphmatch/descriptors.h"
#include "graphmatch/types.h"

namespace graphmatch {

// Synthetic photo collection: images scattered around spatial clusters, with
// a ground-truth edge between every two images closer than link_radius.
//
// Appearance follows the scene, not the image: each cluster owns landmarks
// scattered like its images, a landmark's descriptor is a fixed random linear
// lift of its position plus a per-landmark texture, and an image observes the
// features_per_image landmarks nearest to it, each with isotropic noise of
// scale descriptor_noise. Nearby images therefore share landmarks, which is
// what both the Fisher prior and descriptor-overlap verification pick up.
struct WorldConfig {
  std::uint32_t num_images = 500;
  std::uint32_t clusters = 10;
  // Standard deviation of image and landmark positions around a cluster
  // center. Centers are uniform in a square of side 4 * sqrt(clusters) *
  // cluster_spread.
  double cluster_spread = 1.0;
  double link_radius = 0.7;
  std::uint32_t descriptor_dim = 32;
  std::uint32_t features_per_image = 64;
  double descriptor_noise = 2.0;
  std::uint32_t landmarks_per_cluster = 256;
  // Magnitude of the position lift relative to the unit landmark texture.
  double appearance_scale = 1.0;
  std::uint64_t seed = 0;

  // Throws PreconditionError when a field is out of range.
  void Validate() const;
};

struct SyntheticWorld {
  WorldConfig config;
  std::vector<std::array<double, 2>> positions;
  std::vector<Edge> truth_edges;  // sorted; inliers = shared landmarks (>= 1)
  Collection collection;
  double density = 0.0;
};

SyntheticWorld GenerateWorld(const WorldConfig& cfg);

// |truth edges| / C(N, 2).
double WorldDensity(const SyntheticWorld& world);
double EdgeDensity(std::size_t num_images, std::size_t num_edges);

// Bundle layout: collection.gmds, truth_edges.txt, world.json.
void WriteWorldBundle(const SyntheticWorld& world, const std::filesystem::path& dir);

struct WorldBundle {
  Collection collection;
  std::vector<Edge> truth_edges;
  WorldConfig config;
  double density = 0.0;
};
WorldBundle LoadWorldBundle(const std::filesystem::path& dir);

std::string WorldConfigToJson(const WorldConfig& cfg, double density);

}  // namespace graphmatch

#endif  // GRAPHMATCH_SIM_H_
