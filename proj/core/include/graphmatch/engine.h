#ifndef GRAPHMATCH_ENGINE_H_
#define GRAPHMATCH_ENGINE_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "graphmatch/error.h"
#include "graphmatch/graph.h"
#include "graphmatch/metrics.h"
#include "graphmatch/prior.h"
#include "graphmatch/verify.h"

namespace graphmatch {

// How propagation orders the candidates C of an edge A-B (C a neighbor of B).
enum class TripletRanking {
  kFisherDistance,  // ascending prior distance d(A, C)
  kInlierRatio,     // descending InlierRatioScore of A-B-C
};

std::string_view TripletRankingName(TripletRanking ranking);
TripletRanking ParseTripletRanking(std::string_view name);

enum class StageMode {
  kBoth,
  kSamplingOnly,
  // Sampling runs in the first iteration only, to give propagation edges to
  // start from; every later iteration propagates.
  kPropagationOnly,
};

std::string_view StageModeName(StageMode mode);

struct EngineConfig {
  std::uint32_t number_sample_iterations = 10;
  std::uint32_t max_num_neighbors = 120;
  std::uint32_t num_to_propagate = 4;
  std::uint32_t max_tests_for_sampling = 10;
  std::uint64_t seed = 0;
  TripletRanking triplet_ranking = TripletRanking::kFisherDistance;
  StageMode stage_mode = StageMode::kBoth;
  double cost_per_test = 1.0;
  int num_threads = 1;

  // Candidates pulled from each ranked list per sampling iteration.
  std::uint32_t SamplesPerIteration() const;
  // Throws PreconditionError when a field is out of range.
  void Validate() const;
};

// max_tests_for_sampling = max(min(round(0.017 N), 120), 10) and the fixed
// defaults for the other three parameters.
EngineConfig DefaultConfig(std::size_t num_images);

// Per-vertex progress through the ranked lists.
struct SamplingState {
  explicit SamplingState(std::size_t n) : cursor(n, 0), consumed(n, 0) {}

  std::vector<std::size_t> cursor;
  std::vector<std::uint32_t> consumed;
};

// Next untested candidates from the ranked list of every vertex that is below
// both the neighbor cap and its sampling budget. Entries already tested are
// skipped without consuming budget. Returns a sorted, deduplicated batch.
std::vector<ImagePair> SamplingStep(const PriorIndex& prior, const MatchGraph& graph,
                                    SamplingState& state, const EngineConfig& cfg);

// For every edge A-B with A below the neighbor cap, the top num_to_propagate
// untested pairs (A, C) over neighbors C of B, and symmetrically for B.
// `feature_counts` is only read in kInlierRatio mode.
std::vector<ImagePair> PropagationStep(const PriorIndex& prior, const MatchGraph& graph,
                                       std::span<const std::uint32_t> feature_counts,
                                       const EngineConfig& cfg);

struct RunResult {
  MatchGraph graph;
  RunMetrics metrics;
};

// Raised when verification fails mid-run; carries everything recorded before
// the failing batch.
class RunAborted : public DataError {
 public:
  RunAborted(const std::string& message, RunResult partial)
      : DataError(message), partial_(std::make_shared<RunResult>(std::move(partial))) {}
  const RunResult& partial() const { return *partial_; }

 private:
  std::shared_ptr<RunResult> partial_;
};

// Alternates sampling and propagation until neither produces a candidate.
RunResult RunGraphMatch(const PriorIndex& prior, Verifier& verifier, const EngineConfig& cfg,
                        std::span<const std::uint32_t> feature_counts = {});

// Verifies `batch` in canonical order and records it; shared by all
// strategies. Throws RunAborted on verifier failure.
void VerifyAndRecord(Verifier& verifier, const std::vector<ImagePair>& batch,
                     std::uint32_t iteration, Stage stage, int num_threads, RunResult& result);

struct RankedCandidate {
  ImagePair pair;
  double distance = 0.0;
};

struct RankedSelection {
  std::vector<RankedCandidate> selected;
  double expected_edges = 0.0;
};

// The k smallest-distance candidates, which maximize the expected number of
// edges whenever Pr(edge | distance) is non-increasing, and that expectation.
RankedSelection ExpectedEdgesRankedSelection(std::vector<RankedCandidate> candidates,
                                             const EdgeProbabilityModel& model, std::size_t k);

}  // namespace graphmatch

#endif  // GRAPHMATCH_ENGINE_H_
