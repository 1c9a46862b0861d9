#ifndef GRAPHMATCH_TESTS_TEST_SUPPORT_H_
#define GRAPHMATCH_TESTS_TEST_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graphmatch/descriptors.h"
#include "graphmatch/graph.h"
#include "graphmatch/sim.h"

namespace graphmatch::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::filesystem::path& path);

// Gaussian descriptors; image i gets counts[i] rows.
Collection RandomCollection(std::uint64_t seed, const std::vector<std::size_t>& counts, int dim);

// Erdos-Renyi edge set with inliers = 30.
std::vector<Edge> RandomEdges(std::uint64_t seed, std::size_t n, double p);

// Small world that keeps unit tests fast.
WorldConfig SmallWorld(std::uint64_t seed, std::uint32_t num_images = 60);

}  // namespace graphmatch::testing

#endif  // GRAPHMATCH_TESTS_TEST_SUPPORT_H_
