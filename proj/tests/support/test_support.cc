#include "test_support.h"

#include <atomic>
#include <fstream>
#include <iterator>

#include <unistd.h>

#include "graphmatch/random.h"

namespace graphmatch::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("graphmatch_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Collection RandomCollection(std::uint64_t seed, const std::vector<std::size_t>& counts, int dim) {
  Rng rng(seed);
  std::vector<DescriptorSet> images;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    DescriptorSet set;
    set.image_id = static_cast<ImageId>(i);
    set.rows.resize(static_cast<Eigen::Index>(counts[i]), dim);
    for (Eigen::Index r = 0; r < set.rows.rows(); ++r) {
      for (int d = 0; d < dim; ++d) set.rows(r, d) = static_cast<float>(rng.Normal());
    }
    images.push_back(std::move(set));
  }
  return Collection(std::move(images), dim);
}

std::vector<Edge> RandomEdges(std::uint64_t seed, std::size_t n, double p) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (ImageId a = 0; a < n; ++a) {
    for (ImageId b = a + 1; b < n; ++b) {
      if (rng.Uniform() < p) edges.push_back({ImagePair{a, b}, 30});
    }
  }
  return edges;
}

WorldConfig SmallWorld(std::uint64_t seed, std::uint32_t num_images) {
  WorldConfig cfg;
  cfg.num_images = num_images;
  cfg.clusters = 3;
  cfg.descriptor_dim = 8;
  cfg.features_per_image = 24;
  cfg.landmarks_per_cluster = 64;
  cfg.seed = seed;
  return cfg;
}

}  // namespace graphmatch::testing
