#ifndef GRAPHMATCH_BASELINES_H_
#define GRAPHMATCH_BASELINES_H_

#include <cstdint>
#include <string_view>

#include "graphmatch/engine.h"

namespace graphmatch {

enum class BaselineKind { kBruteForce, kRandom, kQueryExpansion };

std::string_view BaselineName(BaselineKind kind);

struct BaselineConfig {
  BaselineKind kind = BaselineKind::kBruteForce;
  std::uint64_t budget = 0;           // random: pairs to test
  std::uint32_t retrieval_k = 40;     // query expansion
  std::uint32_t expansion_rounds = 4; // query expansion
  std::uint64_t seed = 0;             // random
  // random: pairs per recorded batch; 0 means N.
  std::uint64_t batch_size = 0;
  double cost_per_test = 1.0;
  int num_threads = 1;
};

// Every one of the C(N, 2) pairs, one batch per row i of pairs (i, j > i).
RunResult RunBruteForce(std::size_t num_images, Verifier& verifier, const BaselineConfig& cfg);

// `budget` distinct pairs drawn uniformly without replacement.
RunResult RunRandom(std::size_t num_images, Verifier& verifier, const BaselineConfig& cfg);

// Retrieval of each image's top retrieval_k prior neighbors, then
// expansion_rounds rounds that verify every untested neighbor-of-neighbor
// pair of the current graph, with no re-ranking and no per-round cap.
RunResult RunQueryExpansion(const PriorIndex& prior, Verifier& verifier, const BaselineConfig& cfg);

}  // namespace graphmatch

#endif  // GRAPHMATCH_BASELINES_H_
