#include "graphmatch/pipeline.h"

#include "graphmatch/error.h"
#include "graphmatch/random.h"

namespace graphmatch {

Preprocessed Preprocess(const Collection& collection, const PreprocessConfig& cfg) {
  if (collection.size() < 2) throw PreconditionError("a discovery run needs at least two images");
  const DescriptorMatrix training =
      SampleFeatures(collection, cfg.features_per_image, DeriveSeed(cfg.seed, 1));

  EmConfig em;
  em.num_components = cfg.num_components;
  em.max_iters = cfg.em_max_iters;
  em.tol = cfg.em_tol;
  em.variance_floor = cfg.variance_floor;
  em.seed = DeriveSeed(cfg.seed, 2);
  em.num_threads = cfg.num_threads;

  Preprocessed out;
  out.gmm = TrainGmm(training, em);
  out.vectors = EncodeCollection(out.gmm, collection, cfg.encoder, cfg.num_threads);
  PriorOptions prior_options;
  prior_options.num_threads = cfg.num_threads;
  out.prior = BuildPriorIndex(out.vectors, prior_options);
  return out;
}

}  // namespace graphmatch
