#ifndef GRAPHMATCH_GRAPH_H_
#define GRAPHMATCH_GRAPH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "graphmatch/types.h"

namespace graphmatch {

// The evolving matching graph. Every tested pair is remembered, matched or
// not, so no strategy ever verifies a pair twice.
class MatchGraph {
 public:
  explicit MatchGraph(std::size_t num_vertices = 0);
  // Graph whose tested set equals its edge set.
  static MatchGraph FromEdges(std::size_t num_vertices, const std::vector<Edge>& edges);

  // Throws PreconditionError on a self-pair, an out-of-range vertex, or a pair
  // that was already recorded.
  void RecordResult(ImagePair pair, const VerificationOutcome& outcome);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::size_t num_tested() const { return tested_.size(); }

  bool IsTested(ImagePair pair) const { return tested_.contains(pair.Key()); }
  bool HasEdge(ImagePair pair) const;
  // Inlier count of an edge, or nullopt when the pair is not an edge.
  std::optional<std::uint32_t> Inliers(ImagePair pair) const;
  std::uint32_t Degree(ImageId v) const { return static_cast<std::uint32_t>(adjacency_[v].size()); }
  // Neighbors in insertion order.
  const std::vector<ImageId>& Neighbors(ImageId v) const { return adjacency_[v]; }

  // Edges sorted by pair.
  std::vector<Edge> SortedEdges() const;
  // Tested pairs that are not edges, sorted.
  std::vector<ImagePair> SortedNonEdges() const;

 private:
  static constexpr std::int64_t kNonEdge = -1;

  std::vector<std::vector<ImageId>> adjacency_;
  // Pair key -> inlier count, or kNonEdge.
  std::unordered_map<std::uint64_t, std::int64_t> tested_;
  std::size_t num_edges_ = 0;
};

struct Triplet {
  ImageId a = 0;
  ImageId b = 0;  // shared neighbor
  ImageId c = 0;

  friend auto operator<=>(const Triplet&, const Triplet&) = default;
};

// Shortest-path length from a to b after removing the direct edge a-b, if
// present. nullopt when b is unreachable. Throws when a == b.
std::optional<std::uint32_t> ModifiedGraphDistance(const MatchGraph& graph, ImageId a, ImageId b);

// Counts of truth edges and truth non-edges per modified graph distance over
// all unordered pairs. Unreachable pairs are tallied separately.
struct GraphDistanceStats {
  std::map<std::uint32_t, std::uint64_t> edge_counts;
  std::map<std::uint32_t, std::uint64_t> nonedge_counts;
  std::uint64_t unreachable_edges = 0;
  std::uint64_t unreachable_nonedges = 0;

  std::uint64_t TotalEdges() const;
  std::uint64_t TotalNonEdges() const;
  // Pr(truth edge | modified distance in [lo, hi]); hi == UINT32_MAX includes
  // unreachable pairs. nullopt when no pair falls in the range.
  std::optional<double> EdgeProbability(std::uint32_t lo, std::uint32_t hi) const;
  // Normalized PMFs over distance (unreachable excluded from the keys).
  std::map<std::uint32_t, double> EdgePmf() const;
  std::map<std::uint32_t, double> NonEdgePmf() const;
};

GraphDistanceStats ComputeGraphDistanceStats(const MatchGraph& graph,
                                             const std::vector<Edge>& truth);

// All (A, B, C) with edges A-B and B-C and A-C untested, A < C, sorted.
std::vector<Triplet> ExtractTriplets(const MatchGraph& graph);

// Text edge list: "# N <count>" then "<i> <j> <inliers>" per edge, i < j,
// sorted.
void WriteEdgeList(const std::filesystem::path& path, std::size_t num_vertices,
                   const std::vector<Edge>& edges);
struct EdgeListFile {
  std::size_t num_vertices = 0;
  std::vector<Edge> edges;
};
EdgeListFile ReadEdgeList(const std::filesystem::path& path);

// Tested non-edges: "<i> <j>" per line, sorted.
void WritePairList(const std::filesystem::path& path, const std::vector<ImagePair>& pairs);
std::vector<ImagePair> ReadPairList(const std::filesystem::path& path);

}  // namespace graphmatch

#endif  // GRAPHMATCH_GRAPH_H_
