#include "graphmatch/baselines.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "graphmatch/random.h"

namespace graphmatch {
namespace {

std::uint64_t PairCount(std::size_t n) { return static_cast<std::uint64_t>(n) * (n - 1) / 2; }

// Inverse of the row-major enumeration of pairs (i, j), i < j.
ImagePair UnrankPair(std::uint64_t index, std::size_t n) {
  // Row i holds n - 1 - i pairs and starts at i * (2n - i - 1) / 2.
  const double nn = static_cast<double>(n);
  auto row_start = [n](std::uint64_t i) { return i * (2 * n - i - 1) / 2; };
  auto i = static_cast<std::uint64_t>(
      std::floor((2.0 * nn - 1.0 - std::sqrt((2.0 * nn - 1.0) * (2.0 * nn - 1.0) -
                                             8.0 * static_cast<double>(index))) / 2.0));
  // Correct any floating-point drift.
  while (i > 0 && row_start(i) > index) --i;
  while (i + 1 < n && row_start(i + 1) <= index) ++i;
  const std::uint64_t j = i + 1 + (index - row_start(i));
  return ImagePair{static_cast<ImageId>(i), static_cast<ImageId>(j)};
}

void CheckImageCount(std::size_t n) {
  if (n < 2) throw PreconditionError("a discovery run needs at least two images");
}

}  // namespace

std::string_view BaselineName(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kBruteForce: return "brute_force";
    case BaselineKind::kRandom: return "random";
    case BaselineKind::kQueryExpansion: return "query_expansion";
  }
  return "unknown";
}

RunResult RunBruteForce(std::size_t num_images, Verifier& verifier, const BaselineConfig& cfg) {
  CheckImageCount(num_images);
  RunResult result{MatchGraph(num_images), RunMetrics(cfg.cost_per_test)};
  std::vector<ImagePair> batch;
  for (ImageId i = 0; i + 1 < num_images; ++i) {
    batch.clear();
    for (ImageId j = i + 1; j < num_images; ++j) batch.push_back({i, j});
    VerifyAndRecord(verifier, batch, i + 1, Stage::kBruteForce, cfg.num_threads, result);
  }
  return result;
}

RunResult RunRandom(std::size_t num_images, Verifier& verifier, const BaselineConfig& cfg) {
  CheckImageCount(num_images);
  const std::uint64_t total = PairCount(num_images);
  if (cfg.budget > total) {
    throw PreconditionError(
        fmt::format("random budget {} exceeds the {} available pairs", cfg.budget, total));
  }
  // Sparse Fisher-Yates over the pair index space.
  Rng rng(cfg.seed);
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto slot = [&](std::uint64_t i) {
    const auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<ImagePair> order;
  order.reserve(cfg.budget);
  for (std::uint64_t i = 0; i < cfg.budget; ++i) {
    const std::uint64_t j = i + rng.UniformInt(total - i);
    const std::uint64_t pick = slot(j);
    swapped[j] = slot(i);
    order.push_back(UnrankPair(pick, num_images));
  }

  RunResult result{MatchGraph(num_images), RunMetrics(cfg.cost_per_test)};
  const std::uint64_t batch_size = cfg.batch_size == 0 ? num_images : cfg.batch_size;
  std::uint32_t iteration = 1;
  for (std::uint64_t start = 0; start < order.size(); start += batch_size, ++iteration) {
    const auto end = std::min<std::uint64_t>(order.size(), start + batch_size);
    std::vector<ImagePair> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                 order.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(batch.begin(), batch.end());
    VerifyAndRecord(verifier, batch, iteration, Stage::kRandom, cfg.num_threads, result);
  }
  return result;
}

RunResult RunQueryExpansion(const PriorIndex& prior, Verifier& verifier, const BaselineConfig& cfg) {
  const std::size_t n = prior.size();
  CheckImageCount(n);
  if (cfg.retrieval_k < 1 || cfg.retrieval_k >= n) {
    throw PreconditionError(fmt::format("retrieval_k must be in [1, N) (N = {})", n));
  }
  RunResult result{MatchGraph(n), RunMetrics(cfg.cost_per_test)};

  std::vector<ImagePair> batch;
  for (ImageId v = 0; v < n; ++v) {
    const auto& ranked = prior.Ranked(v);
    for (std::uint32_t r = 0; r < cfg.retrieval_k; ++r) batch.push_back(ImagePair::Make(v, ranked[r]));
  }
  std::sort(batch.begin(), batch.end());
  batch.erase(std::unique(batch.begin(), batch.end()), batch.end());
  VerifyAndRecord(verifier, batch, 0, Stage::kRetrieval, cfg.num_threads, result);

  for (std::uint32_t round = 1; round <= cfg.expansion_rounds; ++round) {
    batch.clear();
    const MatchGraph& graph = result.graph;
    for (const Edge& edge : graph.SortedEdges()) {
      for (const auto& [source, via] : {std::pair{edge.pair.first, edge.pair.second},
                                        std::pair{edge.pair.second, edge.pair.first}}) {
        for (ImageId target : graph.Neighbors(via)) {
          if (target == source) continue;
          const ImagePair pair = ImagePair::Make(source, target);
          if (!graph.IsTested(pair)) batch.push_back(pair);
        }
      }
    }
    std::sort(batch.begin(), batch.end());
    batch.erase(std::unique(batch.begin(), batch.end()), batch.end());
    VerifyAndRecord(verifier, batch, round, Stage::kExpansion, cfg.num_threads, result);
  }
  return result;
}

}  // namespace graphmatch
