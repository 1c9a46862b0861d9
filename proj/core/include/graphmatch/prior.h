#ifndef GRAPHMATCH_PRIOR_H_
#define GRAPHMATCH_PRIOR_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "graphmatch/fisher.h"
#include "graphmatch/graph.h"

namespace graphmatch {

struct PriorOptions {
  int num_threads = 1;
  // The dense N x N matrix is refused above this many images.
  std::size_t max_images = 20000;
};

// Symmetric distance matrix between global image vectors, plus per-image
// lists of all other images by ascending distance (ties by ascending id).
class PriorIndex {
 public:
  PriorIndex() = default;
  PriorIndex(std::size_t n, std::vector<float> distances, std::vector<std::vector<ImageId>> ranked);

  std::size_t size() const { return n_; }
  float Distance(ImageId a, ImageId b) const { return distances_[a * n_ + b]; }
  const std::vector<ImageId>& Ranked(ImageId v) const { return ranked_[v]; }
  const std::vector<float>& distances() const { return distances_; }

 private:
  std::size_t n_ = 0;
  std::vector<float> distances_;
  std::vector<std::vector<ImageId>> ranked_;
};

// Euclidean distances, each unordered pair computed once and mirrored.
PriorIndex BuildPriorIndex(const VectorStore& vectors, const PriorOptions& options = {});
// Vectors must carry the ids 0..N-1 (any order).
PriorIndex BuildPriorIndex(const std::vector<GlobalVector>& vectors,
                           const PriorOptions& options = {});

// Empirical Pr(edge | distance) over equal-width distance bins, made
// non-increasing in distance.
struct EdgeProbabilityModel {
  std::vector<double> bin_edges;       // bins + 1 ascending thresholds
  std::vector<double> bin_probs;       // after interpolation + isotonic fit
  std::vector<std::uint64_t> tested;   // tested pairs per bin
  std::vector<std::uint64_t> matched;  // matched pairs per bin

  std::size_t num_bins() const { return bin_probs.size(); }
  std::size_t BinOf(double distance) const;
  double Probability(double distance) const { return bin_probs[BinOf(distance)]; }
};

// Calibrates from the tested pairs of `graph`. Empty bins are linearly
// interpolated from the nearest populated bins, then the whole curve is
// projected onto non-increasing sequences (weighted by tested counts).
EdgeProbabilityModel CalibrateEdgeProbability(const PriorIndex& index, const MatchGraph& graph,
                                              std::size_t bins);

// Pool-adjacent-violators projection onto non-increasing sequences.
std::vector<double> IsotonicNonIncreasing(const std::vector<double>& values,
                                          const std::vector<double>& weights);

struct RocPoint {
  double threshold = 0.0;
  double true_edge_rate = 0.0;
  double false_edge_rate = 0.0;
};

struct PriorStats {
  std::vector<double> bin_edges;
  std::vector<double> edge_density;     // PDF of distances over truth edges
  std::vector<double> nonedge_density;  // PDF over truth non-edges
  std::vector<double> edge_cdf;         // at each bin's upper edge
  std::vector<double> nonedge_cdf;
  // One point per distinct distance; "predict edge if distance <= threshold".
  std::vector<RocPoint> roc;
  // Area under the ROC curve; nullopt when either class is empty.
  std::optional<double> auc;
  bool edge_set_empty = false;
};

PriorStats ComputePriorStats(const PriorIndex& index, const std::vector<Edge>& truth,
                             std::size_t bins = 50);

// prior_pdf.csv and prior_roc.csv in `dir`.
void WritePriorStatsCsv(const PriorStats& stats, const std::filesystem::path& dir);

}  // namespace graphmatch

#endif  // GRAPHMATCH_PRIOR_H_
