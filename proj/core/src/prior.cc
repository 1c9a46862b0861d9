#include "graphmatch/prior.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "graphmatch/error.h"
#include "graphmatch/parallel.h"

namespace graphmatch {

PriorIndex::PriorIndex(std::size_t n, std::vector<float> distances,
                       std::vector<std::vector<ImageId>> ranked)
    : n_(n), distances_(std::move(distances)), ranked_(std::move(ranked)) {}

PriorIndex BuildPriorIndex(const VectorStore& vectors, const PriorOptions& options) {
  const std::size_t n = vectors.size();
  if (n < 2) throw PreconditionError("prior index needs at least two vectors");
  if (n > options.max_images) {
    throw PreconditionError(fmt::format("{} images exceed the in-memory prior cap of {}", n,
                                        options.max_images));
  }
  if (!vectors.values.allFinite()) throw PreconditionError("non-finite global vector");

  const auto dim = static_cast<std::size_t>(vectors.dim());
  const float* data = vectors.values.data();
  std::vector<float> distances(n * n, 0.0f);
  // Row task i owns cells (i, j) and (j, i) for j > i.
  ParallelFor(n, options.num_threads, [&](std::size_t i) {
    const float* a = data + i * dim;
    for (std::size_t j = i + 1; j < n; ++j) {
      const float* b = data + j * dim;
      double sum = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = static_cast<double>(a[d]) - static_cast<double>(b[d]);
        sum += diff * diff;
      }
      const auto dist = static_cast<float>(std::sqrt(sum));
      distances[i * n + j] = dist;
      distances[j * n + i] = dist;
    }
  });

  std::vector<std::vector<ImageId>> ranked(n);
  ParallelFor(n, options.num_threads, [&](std::size_t i) {
    auto& list = ranked[i];
    list.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) list.push_back(static_cast<ImageId>(j));
    }
    const float* row = distances.data() + i * n;
    std::sort(list.begin(), list.end(), [row](ImageId x, ImageId y) {
      return row[x] != row[y] ? row[x] < row[y] : x < y;
    });
  });
  return PriorIndex(n, std::move(distances), std::move(ranked));
}

PriorIndex BuildPriorIndex(const std::vector<GlobalVector>& vectors, const PriorOptions& options) {
  if (vectors.size() < 2) throw PreconditionError("prior index needs at least two vectors");
  const Eigen::Index dim = vectors.front().values.size();
  VectorStore store;
  store.values.resize(static_cast<Eigen::Index>(vectors.size()), dim);
  std::vector<bool> seen(vectors.size(), false);
  for (const GlobalVector& v : vectors) {
    if (v.values.size() != dim) throw PreconditionError("global vectors differ in dimension");
    if (v.image_id >= vectors.size() || seen[v.image_id]) {
      throw PreconditionError(fmt::format("invalid or duplicate image id {}", v.image_id));
    }
    if (!v.values.allFinite()) throw PreconditionError("non-finite global vector");
    seen[v.image_id] = true;
    store.values.row(v.image_id) = v.values.cast<float>().transpose();
  }
  return BuildPriorIndex(store, options);
}

std::size_t EdgeProbabilityModel::BinOf(double distance) const {
  const auto it = std::upper_bound(bin_edges.begin() + 1, bin_edges.end() - 1, distance);
  return static_cast<std::size_t>(it - (bin_edges.begin() + 1));
}

std::vector<double> IsotonicNonIncreasing(const std::vector<double>& values,
                                          const std::vector<double>& weights) {
  struct Block {
    double mean;
    double weight;
    std::size_t length;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({values[i], weights[i], 1});
    // Merge while the non-increasing order is violated.
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean < blocks.back().mean) {
      Block last = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double total = prev.weight + last.weight;
      prev.mean = total > 0.0 ? (prev.mean * prev.weight + last.mean * last.weight) / total
                              : 0.5 * (prev.mean + last.mean);
      prev.weight = total;
      prev.length += last.length;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) out.insert(out.end(), b.length, b.mean);
  return out;
}

EdgeProbabilityModel CalibrateEdgeProbability(const PriorIndex& index, const MatchGraph& graph,
                                              std::size_t bins) {
  if (bins == 0) throw PreconditionError("calibration needs at least one bin");
  if (graph.num_tested() == 0) throw PreconditionError("calibration needs tested pairs");
  if (graph.num_vertices() != index.size()) {
    throw PreconditionError("graph and prior index disagree on N");
  }

  struct Sample {
    double distance;
    bool matched;
  };
  std::vector<Sample> samples;
  for (const Edge& e : graph.SortedEdges()) {
    samples.push_back({index.Distance(e.pair.first, e.pair.second), true});
  }
  for (const ImagePair& p : graph.SortedNonEdges()) {
    samples.push_back({index.Distance(p.first, p.second), false});
  }
  double lo = samples.front().distance;
  double hi = lo;
  for (const Sample& s : samples) {
    lo = std::min(lo, s.distance);
    hi = std::max(hi, s.distance);
  }
  if (hi <= lo) hi = lo + 1.0;

  EdgeProbabilityModel model;
  model.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    model.bin_edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  model.bin_edges.back() = hi;
  model.tested.assign(bins, 0);
  model.matched.assign(bins, 0);
  for (const Sample& s : samples) {
    const std::size_t b = model.BinOf(s.distance);
    ++model.tested[b];
    if (s.matched) ++model.matched[b];
  }

  std::vector<std::size_t> populated;
  for (std::size_t b = 0; b < bins; ++b) {
    if (model.tested[b] > 0) populated.push_back(b);
  }
  std::vector<double> raw(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    if (model.tested[b] > 0) {
      raw[b] = static_cast<double>(model.matched[b]) / static_cast<double>(model.tested[b]);
      continue;
    }
    const auto after = std::upper_bound(populated.begin(), populated.end(), b);
    const auto ratio = [&](std::size_t p) {
      return static_cast<double>(model.matched[p]) / static_cast<double>(model.tested[p]);
    };
    if (after == populated.begin()) {
      raw[b] = ratio(*after);
    } else if (after == populated.end()) {
      raw[b] = ratio(populated.back());
    } else {
      const std::size_t left = *(after - 1);
      const std::size_t right = *after;
      const double t = static_cast<double>(b - left) / static_cast<double>(right - left);
      raw[b] = (1.0 - t) * ratio(left) + t * ratio(right);
    }
  }
  std::vector<double> weights(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    // Interpolated bins carry negligible weight in the isotonic fit.
    weights[b] = model.tested[b] > 0 ? static_cast<double>(model.tested[b]) : 1e-9;
  }
  model.bin_probs = IsotonicNonIncreasing(raw, weights);
  return model;
}

PriorStats ComputePriorStats(const PriorIndex& index, const std::vector<Edge>& truth,
                             std::size_t bins) {
  if (bins == 0) throw PreconditionError("prior stats need at least one bin");
  const std::size_t n = index.size();
  std::unordered_set<std::uint64_t> truth_keys;
  for (const Edge& e : truth) {
    if (e.pair.first >= e.pair.second || e.pair.second >= n) {
      throw PreconditionError(fmt::format("truth pair ({},{}) is invalid for N={}", e.pair.first,
                                          e.pair.second, n));
    }
    truth_keys.insert(e.pair.Key());
  }

  struct Sample {
    float distance;
    bool edge;
  };
  std::vector<Sample> samples;
  samples.reserve(n * (n - 1) / 2);
  for (ImageId i = 0; i < n; ++i) {
    for (ImageId j = i + 1; j < n; ++j) {
      samples.push_back({index.Distance(i, j), truth_keys.contains(ImagePair{i, j}.Key())});
    }
  }
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.edge > b.edge;
  });

  PriorStats stats;
  const std::uint64_t total_edges = truth_keys.size();
  const std::uint64_t total_nonedges = samples.size() - total_edges;
  stats.edge_set_empty = total_edges == 0;

  double lo = samples.empty() ? 0.0 : samples.front().distance;
  double hi = samples.empty() ? 1.0 : samples.back().distance;
  if (hi <= lo) hi = lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  stats.bin_edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) stats.bin_edges[b] = lo + width * static_cast<double>(b);
  stats.bin_edges.back() = hi;

  std::vector<std::uint64_t> edge_hist(bins, 0);
  std::vector<std::uint64_t> nonedge_hist(bins, 0);
  for (const Sample& s : samples) {
    auto b = static_cast<std::size_t>((s.distance - lo) / width);
    b = std::min(b, bins - 1);
    ++(s.edge ? edge_hist : nonedge_hist)[b];
  }
  auto density = [&](const std::vector<std::uint64_t>& hist, std::uint64_t total,
                     std::vector<double>& pdf, std::vector<double>& cdf) {
    pdf.assign(bins, 0.0);
    cdf.assign(bins, 0.0);
    std::uint64_t running = 0;
    for (std::size_t b = 0; b < bins; ++b) {
      running += hist[b];
      if (total == 0) continue;
      pdf[b] = static_cast<double>(hist[b]) / (static_cast<double>(total) * width);
      cdf[b] = static_cast<double>(running) / static_cast<double>(total);
    }
  };
  density(edge_hist, total_edges, stats.edge_density, stats.edge_cdf);
  density(nonedge_hist, total_nonedges, stats.nonedge_density, stats.nonedge_cdf);

  if (total_edges == 0 || total_nonedges == 0) return stats;

  // Sweep thresholds over distinct distances; trapezoids give the AUC with
  // ties counted as one half.
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  double auc = 0.0;
  double prev_tpr = 0.0;
  double prev_fpr = 0.0;
  for (std::size_t i = 0; i < samples.size();) {
    const float threshold = samples[i].distance;
    while (i < samples.size() && samples[i].distance == threshold) {
      ++(samples[i].edge ? tp : fp);
      ++i;
    }
    const double tpr = static_cast<double>(tp) / static_cast<double>(total_edges);
    const double fpr = static_cast<double>(fp) / static_cast<double>(total_nonedges);
    auc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
    stats.roc.push_back({threshold, tpr, fpr});
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  stats.auc = auc;
  return stats;
}

void WritePriorStatsCsv(const PriorStats& stats, const std::filesystem::path& dir) {
  std::ofstream pdf(dir / "prior_pdf.csv", std::ios::trunc);
  if (!pdf) throw DataError(fmt::format("cannot write {}", (dir / "prior_pdf.csv").string()));
  pdf << "bin_lo,bin_hi,edge_density,nonedge_density\n";
  for (std::size_t b = 0; b + 1 < stats.bin_edges.size(); ++b) {
    pdf << fmt::format("{},{},{},{}\n", stats.bin_edges[b], stats.bin_edges[b + 1],
                       stats.edge_density[b], stats.nonedge_density[b]);
  }
  std::ofstream roc(dir / "prior_roc.csv", std::ios::trunc);
  if (!roc) throw DataError(fmt::format("cannot write {}", (dir / "prior_roc.csv").string()));
  roc << "threshold,true_edge_rate,false_edge_rate\n";
  for (const RocPoint& p : stats.roc) {
    roc << fmt::format("{},{},{}\n", p.threshold, p.true_edge_rate, p.false_edge_rate);
  }
}

}  // namespace graphmatch
