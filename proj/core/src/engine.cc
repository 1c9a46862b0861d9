#include "graphmatch/engine.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "graphmatch/parallel.h"

namespace graphmatch {
namespace {

constexpr std::size_t kVertexShard = 64;

void SortUnique(std::vector<ImagePair>& pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

}  // namespace

std::string_view TripletRankingName(TripletRanking ranking) {
  return ranking == TripletRanking::kFisherDistance ? "fisher_distance" : "inlier_ratio";
}

TripletRanking ParseTripletRanking(std::string_view name) {
  if (name == "fisher_distance") return TripletRanking::kFisherDistance;
  if (name == "inlier_ratio") return TripletRanking::kInlierRatio;
  throw PreconditionError(fmt::format("unknown triplet ranking '{}'", name));
}

std::string_view StageModeName(StageMode mode) {
  switch (mode) {
    case StageMode::kBoth: return "both";
    case StageMode::kSamplingOnly: return "sampling_only";
    case StageMode::kPropagationOnly: return "propagation_only";
  }
  return "unknown";
}

std::uint32_t EngineConfig::SamplesPerIteration() const {
  return std::max<std::uint32_t>(1, max_tests_for_sampling / number_sample_iterations);
}

void EngineConfig::Validate() const {
  if (number_sample_iterations == 0) throw PreconditionError("number_sample_iterations must be positive");
  if (max_num_neighbors == 0) throw PreconditionError("max_num_neighbors must be positive");
  if (num_to_propagate == 0) throw PreconditionError("num_to_propagate must be positive");
  if (max_tests_for_sampling < number_sample_iterations) {
    throw PreconditionError(fmt::format(
        "max_tests_for_sampling ({}) must be >= number_sample_iterations ({})",
        max_tests_for_sampling, number_sample_iterations));
  }
  if (!(cost_per_test >= 0.0)) throw PreconditionError("cost_per_test must be non-negative");
}

EngineConfig DefaultConfig(std::size_t num_images) {
  if (num_images < 2) throw PreconditionError("a discovery run needs at least two images");
  EngineConfig cfg;
  cfg.number_sample_iterations = 10;
  cfg.max_num_neighbors = 120;
  cfg.num_to_propagate = 4;
  const double scaled = std::round(0.017 * static_cast<double>(num_images));
  cfg.max_tests_for_sampling =
      static_cast<std::uint32_t>(std::max(std::min(scaled, 120.0), 10.0));
  return cfg;
}

std::vector<ImagePair> SamplingStep(const PriorIndex& prior, const MatchGraph& graph,
                                    SamplingState& state, const EngineConfig& cfg) {
  const std::size_t n = prior.size();
  const std::uint32_t per_iteration = cfg.SamplesPerIteration();
  const std::size_t shards = NumChunks(n, kVertexShard);
  std::vector<std::vector<ImagePair>> shard_pairs(shards);

  // Each shard owns the cursor/consumed entries of its vertices.
  ParallelFor(shards, cfg.num_threads, [&](std::size_t shard) {
    const std::size_t end = std::min(n, (shard + 1) * kVertexShard);
    for (std::size_t v = shard * kVertexShard; v < end; ++v) {
      const auto vertex = static_cast<ImageId>(v);
      if (graph.Degree(vertex) >= cfg.max_num_neighbors) continue;
      if (state.consumed[v] >= cfg.max_tests_for_sampling) continue;
      std::uint32_t quota =
          std::min(per_iteration, cfg.max_tests_for_sampling - state.consumed[v]);
      const auto& ranked = prior.Ranked(vertex);
      std::size_t& cursor = state.cursor[v];
      while (quota > 0 && cursor < ranked.size()) {
        const ImagePair pair = ImagePair::Make(vertex, ranked[cursor++]);
        if (graph.IsTested(pair)) continue;
        shard_pairs[shard].push_back(pair);
        ++state.consumed[v];
        --quota;
      }
    }
  });

  std::vector<ImagePair> batch;
  for (auto& pairs : shard_pairs) batch.insert(batch.end(), pairs.begin(), pairs.end());
  SortUnique(batch);
  return batch;
}

std::vector<ImagePair> PropagationStep(const PriorIndex& prior, const MatchGraph& graph,
                                       std::span<const std::uint32_t> feature_counts,
                                       const EngineConfig& cfg) {
  const bool by_inliers = cfg.triplet_ranking == TripletRanking::kInlierRatio;
  if (by_inliers && feature_counts.size() != graph.num_vertices()) {
    throw PreconditionError("inlier-ratio ranking needs a feature count per image");
  }
  const std::vector<Edge> edges = graph.SortedEdges();
  std::vector<std::vector<ImagePair>> per_edge(edges.size());

  struct Scored {
    ImageId target;
    double score;  // larger is better
    float distance;
  };

  auto extend = [&](ImageId source, ImageId via, std::uint32_t inliers_source_via,
                    std::vector<ImagePair>& out) {
    if (graph.Degree(source) >= cfg.max_num_neighbors) return;
    std::vector<Scored> candidates;
    for (ImageId target : graph.Neighbors(via)) {
      if (target == source || graph.IsTested(ImagePair::Make(source, target))) continue;
      Scored s{target, 0.0, prior.Distance(source, target)};
      if (by_inliers) {
        const std::uint32_t fs = feature_counts[source];
        const std::uint32_t fv = feature_counts[via];
        const std::uint32_t ft = feature_counts[target];
        const std::uint32_t inliers_via_target = *graph.Inliers(ImagePair::Make(via, target));
        // Verifiers may report more inliers than features (e.g. synthetic
        // false positives); the ratio is capped at one.
        s.score = InlierRatioScore(std::min(inliers_source_via, std::min(fs, fv)), fs, fv,
                                   std::min(inliers_via_target, std::min(fv, ft)), ft);
      }
      candidates.push_back(s);
    }
    const std::size_t take = std::min<std::size_t>(cfg.num_to_propagate, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                      candidates.end(), [](const Scored& x, const Scored& y) {
                        if (x.score != y.score) return x.score > y.score;
                        if (x.distance != y.distance) return x.distance < y.distance;
                        return x.target < y.target;
                      });
    for (std::size_t i = 0; i < take; ++i) {
      out.push_back(ImagePair::Make(source, candidates[i].target));
    }
  };

  ParallelFor(edges.size(), cfg.num_threads, [&](std::size_t e) {
    const Edge& edge = edges[e];
    extend(edge.pair.first, edge.pair.second, edge.inliers, per_edge[e]);
    extend(edge.pair.second, edge.pair.first, edge.inliers, per_edge[e]);
  });

  std::vector<ImagePair> batch;
  for (auto& pairs : per_edge) batch.insert(batch.end(), pairs.begin(), pairs.end());
  SortUnique(batch);
  return batch;
}

void VerifyAndRecord(Verifier& verifier, const std::vector<ImagePair>& batch,
                     std::uint32_t iteration, Stage stage, int num_threads, RunResult& result) {
  if (batch.empty()) return;
  std::vector<VerificationOutcome> outcomes;
  try {
    outcomes = VerifyBatch(verifier, batch, num_threads);
  } catch (const std::exception& e) {
    throw RunAborted(fmt::format("verification failed during {} iteration {}: {}",
                                 StageName(stage), iteration, e.what()),
                     result);
  }
  std::uint64_t matched = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    result.graph.RecordResult(batch[i], outcomes[i]);
    if (outcomes[i].matched) ++matched;
  }
  result.metrics.Append(iteration, stage, batch.size(), matched);
}

RunResult RunGraphMatch(const PriorIndex& prior, Verifier& verifier, const EngineConfig& cfg,
                        std::span<const std::uint32_t> feature_counts) {
  cfg.Validate();
  const std::size_t n = prior.size();
  if (n < 2) throw PreconditionError("a discovery run needs at least two images");
  if (!feature_counts.empty() && feature_counts.size() != n) {
    throw PreconditionError("feature counts and prior index disagree on N");
  }

  RunResult result{MatchGraph(n), RunMetrics(cfg.cost_per_test)};
  SamplingState state(n);
  for (std::uint32_t iteration = 1;; ++iteration) {
    const std::uint32_t sampling_iterations =
        cfg.stage_mode == StageMode::kPropagationOnly ? 1 : cfg.number_sample_iterations;
    std::vector<ImagePair> sampled;
    if (iteration <= sampling_iterations) {
      sampled = SamplingStep(prior, result.graph, state, cfg);
      VerifyAndRecord(verifier, sampled, iteration, Stage::kSampling, cfg.num_threads, result);
    }
    std::vector<ImagePair> propagated;
    if (cfg.stage_mode != StageMode::kSamplingOnly) {
      propagated = PropagationStep(prior, result.graph, feature_counts, cfg);
      VerifyAndRecord(verifier, propagated, iteration, Stage::kPropagation, cfg.num_threads,
                      result);
    }
    if (sampled.empty() && propagated.empty()) break;
  }
  return result;
}

RankedSelection ExpectedEdgesRankedSelection(std::vector<RankedCandidate> candidates,
                                             const EdgeProbabilityModel& model, std::size_t k) {
  if (candidates.empty()) throw PreconditionError("ranked selection needs candidates");
  if (k > candidates.size()) throw PreconditionError("k exceeds the number of candidates");
  for (std::size_t b = 1; b < model.bin_probs.size(); ++b) {
    if (model.bin_probs[b] > model.bin_probs[b - 1]) {
      throw PreconditionError("edge probability model must be non-increasing in distance");
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const RankedCandidate& x, const RankedCandidate& y) {
              return x.distance != y.distance ? x.distance < y.distance : x.pair < y.pair;
            });
  RankedSelection selection;
  selection.selected.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k));
  for (const auto& c : selection.selected) selection.expected_edges += model.Probability(c.distance);
  return selection;
}

}  // namespace graphmatch
