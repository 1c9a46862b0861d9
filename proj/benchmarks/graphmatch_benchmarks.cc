#include <benchmark/benchmark.h>

#include <vector>

#include "graphmatch/descriptors.h"
#include "graphmatch/engine.h"
#include "graphmatch/fisher.h"
#include "graphmatch/gmm.h"
#include "graphmatch/pipeline.h"
#include "graphmatch/prior.h"
#include "graphmatch/random.h"
#include "graphmatch/sim.h"
#include "graphmatch/verify.h"

namespace graphmatch {
namespace {

SyntheticWorld World(std::uint32_t n) {
  WorldConfig cfg;
  cfg.num_images = n;
  cfg.seed = 1;
  return GenerateWorld(cfg);
}

DescriptorMatrix GaussianRows(int rows, int dim, std::uint64_t seed) {
  Rng rng(seed);
  DescriptorMatrix m(rows, dim);
  for (int r = 0; r < rows; ++r) {
    for (int d = 0; d < dim; ++d) m(r, d) = static_cast<float>(rng.Normal());
  }
  return m;
}

void BM_TrainGmm(benchmark::State& state) {
  const DescriptorMatrix data = GaussianRows(static_cast<int>(state.range(0)), 32, 1);
  EmConfig cfg;
  cfg.max_iters = 20;
  for (auto _ : state) benchmark::DoNotOptimize(TrainGmm(data, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainGmm)->Arg(4000)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_EncodeFisher(benchmark::State& state) {
  EmConfig cfg;
  cfg.max_iters = 10;
  const GmmModel model = TrainGmm(GaussianRows(4000, 32, 2), cfg);
  DescriptorSet image;
  image.rows = GaussianRows(static_cast<int>(state.range(0)), 32, 3);
  for (auto _ : state) benchmark::DoNotOptimize(EncodeFisher(model, image));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodeFisher)->Arg(64)->Arg(1000);

void BM_BuildPriorIndex(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::vector<GlobalVector> vectors(n);
  for (std::size_t i = 0; i < n; ++i) {
    vectors[i].image_id = static_cast<ImageId>(i);
    vectors[i].values.resize(1024);
    for (Eigen::Index d = 0; d < 1024; ++d) vectors[i].values[d] = rng.Normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(BuildPriorIndex(vectors));
}
BENCHMARK(BM_BuildPriorIndex)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_RunGraphMatch(benchmark::State& state) {
  const SyntheticWorld world = World(static_cast<std::uint32_t>(state.range(0)));
  const PriorIndex prior = Preprocess(world.collection, PreprocessConfig{}).prior;
  SyntheticVerifier verifier(world.truth_edges, 0.0, 1);
  const EngineConfig cfg = DefaultConfig(world.collection.size());
  std::uint64_t tested = 0;
  for (auto _ : state) {
    const RunResult r = RunGraphMatch(prior, verifier, cfg);
    tested = r.metrics.total_tested();
    benchmark::DoNotOptimize(tested);
  }
  state.counters["tested"] = static_cast<double>(tested);
}
BENCHMARK(BM_RunGraphMatch)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DescriptorOverlapVerify(benchmark::State& state) {
  const SyntheticWorld world = World(200);
  DescriptorOverlapVerifier verifier(world.collection, 0.8, 30);
  std::size_t i = 0;
  for (auto _ : state) {
    const Edge& e = world.truth_edges[i++ % world.truth_edges.size()];
    benchmark::DoNotOptimize(verifier.Verify(e.pair));
  }
}
BENCHMARK(BM_DescriptorOverlapVerify);

}  // namespace
}  // namespace graphmatch

BENCHMARK_MAIN();
