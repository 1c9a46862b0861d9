#ifndef GRAPHMATCH_PIPELINE_H_
#define GRAPHMATCH_PIPELINE_H_

#include <cstdint>

#include "graphmatch/descriptors.h"
#include "graphmatch/fisher.h"
#include "graphmatch/gmm.h"
#include "graphmatch/prior.h"

namespace graphmatch {

struct PreprocessConfig {
  int features_per_image = 1000;
  int num_components = 16;
  int em_max_iters = 100;
  double em_tol = 1e-5;
  double variance_floor = 1e-6;
  EncoderKind encoder = EncoderKind::kFisher;
  std::uint64_t seed = 0;
  int num_threads = 1;
};

struct Preprocessed {
  GmmModel gmm;
  VectorStore vectors;
  PriorIndex prior;
};

// Feature sampling, GMM training, per-image encoding and the prior index.
Preprocessed Preprocess(const Collection& collection, const PreprocessConfig& cfg);

}  // namespace graphmatch

#endif  // GRAPHMATCH_PIPELINE_H_
