#include "graphmatch/sim.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "graphmatch/error.h"
#include "graphmatch/graph.h"
#include "graphmatch/random.h"

namespace graphmatch {
namespace {

double Distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Indices of the k points nearest to `at`, ties by index; returned sorted.
std::vector<std::uint32_t> Nearest(const std::vector<std::array<double, 2>>& points,
                                   const std::array<double, 2>& at, std::size_t k) {
  std::vector<std::pair<double, std::uint32_t>> keyed(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) keyed[i] = {Distance(points[i], at), i};
  k = std::min(k, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end());
  std::vector<std::uint32_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = keyed[i].second;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void WorldConfig::Validate() const {
  if (num_images < 2) throw PreconditionError("world needs at least two images");
  if (clusters < 1) throw PreconditionError("world needs at least one cluster");
  if (!(cluster_spread >= 0.0) || !(link_radius >= 0.0) || !(descriptor_noise >= 0.0) ||
      !(appearance_scale >= 0.0)) {
    throw PreconditionError("world spreads, radius, noise, and scale must be >= 0");
  }
  if (descriptor_dim < 1) throw PreconditionError("descriptor_dim must be positive");
  if (features_per_image < 1) throw PreconditionError("features_per_image must be positive");
  if (landmarks_per_cluster < 1) throw PreconditionError("landmarks_per_cluster must be positive");
}

double EdgeDensity(std::size_t num_images, std::size_t num_edges) {
  if (num_images < 2) return 0.0;
  const double pairs = static_cast<double>(num_images) * static_cast<double>(num_images - 1) / 2.0;
  return static_cast<double>(num_edges) / pairs;
}

double WorldDensity(const SyntheticWorld& world) {
  return EdgeDensity(world.positions.size(), world.truth_edges.size());
}

SyntheticWorld GenerateWorld(const WorldConfig& cfg) {
  cfg.Validate();
  Rng rng(cfg.seed);
  const double side = 4.0 * std::sqrt(static_cast<double>(cfg.clusters)) * cfg.cluster_spread;

  std::vector<std::array<double, 2>> centers(cfg.clusters);
  for (auto& c : centers) c = {rng.Uniform() * side, rng.Uniform() * side};

  SyntheticWorld world;
  world.config = cfg;
  world.positions.resize(cfg.num_images);
  for (auto& p : world.positions) {
    const auto& c = centers[rng.UniformInt(cfg.clusters)];
    p = {c[0] + cfg.cluster_spread * rng.Normal(), c[1] + cfg.cluster_spread * rng.Normal()};
  }

  const std::size_t num_landmarks = static_cast<std::size_t>(cfg.clusters) * cfg.landmarks_per_cluster;
  std::vector<std::array<double, 2>> landmarks(num_landmarks);
  for (std::size_t l = 0; l < num_landmarks; ++l) {
    const auto& c = centers[l / cfg.landmarks_per_cluster];
    landmarks[l] = {c[0] + cfg.cluster_spread * rng.Normal(), c[1] + cfg.cluster_spread * rng.Normal()};
  }

  // Position lift, normalized so one cluster_spread of displacement moves a
  // descriptor by about appearance_scale per dimension.
  const int dim = static_cast<int>(cfg.descriptor_dim);
  Eigen::MatrixXd lift(dim, 2);
  const double lift_scale = cfg.cluster_spread > 0.0 ? cfg.appearance_scale / cfg.cluster_spread : 0.0;
  for (int d = 0; d < dim; ++d) {
    lift(d, 0) = lift_scale * rng.Normal();
    lift(d, 1) = lift_scale * rng.Normal();
  }
  Eigen::MatrixXd landmark_descriptors(static_cast<Eigen::Index>(num_landmarks), dim);
  for (std::size_t l = 0; l < num_landmarks; ++l) {
    for (int d = 0; d < dim; ++d) {
      landmark_descriptors(static_cast<Eigen::Index>(l), d) =
          lift(d, 0) * landmarks[l][0] + lift(d, 1) * landmarks[l][1] + rng.Normal();
    }
  }

  std::vector<std::vector<std::uint32_t>> visible(cfg.num_images);
  std::vector<DescriptorSet> images(cfg.num_images);
  for (ImageId i = 0; i < cfg.num_images; ++i) {
    visible[i] = Nearest(landmarks, world.positions[i], cfg.features_per_image);
    DescriptorSet& image = images[i];
    image.image_id = i;
    image.rows.resize(static_cast<Eigen::Index>(visible[i].size()), dim);
    // Per-image noise stream so one image's noise never shifts another's.
    Rng noise(DeriveSeed(cfg.seed, 0x1000000ull + i));
    for (std::size_t f = 0; f < visible[i].size(); ++f) {
      for (int d = 0; d < dim; ++d) {
        const double clean = landmark_descriptors(static_cast<Eigen::Index>(visible[i][f]), d);
        const double noisy = cfg.descriptor_noise > 0.0 ? clean + cfg.descriptor_noise * noise.Normal() : clean;
        image.rows(static_cast<Eigen::Index>(f), d) = static_cast<float>(noisy);
      }
    }
  }

  for (ImageId i = 0; i < cfg.num_images; ++i) {
    for (ImageId j = i + 1; j < cfg.num_images; ++j) {
      if (Distance(world.positions[i], world.positions[j]) > cfg.link_radius) continue;
      std::vector<std::uint32_t> shared;
      std::set_intersection(visible[i].begin(), visible[i].end(), visible[j].begin(),
                            visible[j].end(), std::back_inserter(shared));
      world.truth_edges.push_back(
          {ImagePair{i, j}, std::max<std::uint32_t>(1, static_cast<std::uint32_t>(shared.size()))});
    }
  }
  world.collection = Collection(std::move(images), dim);
  world.density = WorldDensity(world);
  return world;
}

std::string WorldConfigToJson(const WorldConfig& cfg, double density) {
  nlohmann::ordered_json doc;
  doc["num_images"] = cfg.num_images;
  doc["clusters"] = cfg.clusters;
  doc["cluster_spread"] = cfg.cluster_spread;
  doc["link_radius"] = cfg.link_radius;
  doc["descriptor_dim"] = cfg.descriptor_dim;
  doc["features_per_image"] = cfg.features_per_image;
  doc["descriptor_noise"] = cfg.descriptor_noise;
  doc["landmarks_per_cluster"] = cfg.landmarks_per_cluster;
  doc["appearance_scale"] = cfg.appearance_scale;
  doc["seed"] = cfg.seed;
  doc["density"] = density;
  return doc.dump(2) + "\n";
}

void WriteWorldBundle(const SyntheticWorld& world, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  WriteCollection(world.collection, dir / "collection.gmds");
  WriteEdgeList(dir / "truth_edges.txt", world.positions.size(), world.truth_edges);
  std::ofstream out(dir / "world.json", std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", (dir / "world.json").string()));
  out << WorldConfigToJson(world.config, world.density);
}

WorldBundle LoadWorldBundle(const std::filesystem::path& dir) {
  WorldBundle bundle;
  bundle.collection = LoadCollection(dir / "collection.gmds");
  EdgeListFile truth = ReadEdgeList(dir / "truth_edges.txt");
  if (truth.num_vertices != bundle.collection.size()) {
    throw DataError(fmt::format("{}: truth graph has N={} but the collection has {} images",
                                dir.string(), truth.num_vertices, bundle.collection.size()));
  }
  bundle.truth_edges = std::move(truth.edges);

  std::ifstream in(dir / "world.json");
  if (!in) throw DataError(fmt::format("cannot open {}", (dir / "world.json").string()));
  try {
    const auto doc = nlohmann::json::parse(in);
    WorldConfig& cfg = bundle.config;
    cfg.num_images = doc.at("num_images").get<std::uint32_t>();
    cfg.clusters = doc.at("clusters").get<std::uint32_t>();
    cfg.cluster_spread = doc.at("cluster_spread").get<double>();
    cfg.link_radius = doc.at("link_radius").get<double>();
    cfg.descriptor_dim = doc.at("descriptor_dim").get<std::uint32_t>();
    cfg.features_per_image = doc.at("features_per_image").get<std::uint32_t>();
    cfg.descriptor_noise = doc.at("descriptor_noise").get<double>();
    cfg.landmarks_per_cluster = doc.at("landmarks_per_cluster").get<std::uint32_t>();
    cfg.appearance_scale = doc.at("appearance_scale").get<double>();
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    bundle.density = doc.at("density").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed world.json: {}", e.what()));
  }
  return bundle;
}

}  // namespace graphmatch
