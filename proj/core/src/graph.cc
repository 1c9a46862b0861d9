#include "graphmatch/graph.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_set>

#include <fmt/format.h>

#include "graphmatch/error.h"

namespace graphmatch {
namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// BFS distances from `source`; the edge source-skip_target is not traversed
// when skip_target is set.
std::vector<std::uint32_t> BreadthFirst(const MatchGraph& graph, ImageId source,
                                        std::optional<ImageId> skip_target = std::nullopt,
                                        std::optional<ImageId> stop_at = std::nullopt) {
  std::vector<std::uint32_t> dist(graph.num_vertices(), kUnreached);
  std::deque<ImageId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const ImageId v = queue.front();
    queue.pop_front();
    for (ImageId w : graph.Neighbors(v)) {
      if (skip_target && v == source && w == *skip_target) continue;
      if (skip_target && w == source && v == *skip_target) continue;
      if (dist[w] != kUnreached) continue;
      dist[w] = dist[v] + 1;
      if (stop_at && w == *stop_at) return dist;
      queue.push_back(w);
    }
  }
  return dist;
}

[[noreturn]] void FailLine(const std::filesystem::path& path, std::size_t line,
                           std::string_view message) {
  throw DataError(fmt::format("{}:{}: {}", path.string(), line, message));
}

}  // namespace

MatchGraph::MatchGraph(std::size_t num_vertices) : adjacency_(num_vertices) {}

MatchGraph MatchGraph::FromEdges(std::size_t num_vertices, const std::vector<Edge>& edges) {
  MatchGraph graph(num_vertices);
  for (const Edge& edge : edges) {
    graph.RecordResult(edge.pair, VerificationOutcome{true, edge.inliers, 0.0});
  }
  return graph;
}

void MatchGraph::RecordResult(ImagePair pair, const VerificationOutcome& outcome) {
  if (pair.first == pair.second) {
    throw PreconditionError(fmt::format("self-pair ({0},{0}) cannot be recorded", pair.first));
  }
  if (pair.first > pair.second) pair = ImagePair::Make(pair.first, pair.second);
  if (pair.second >= adjacency_.size()) {
    throw PreconditionError(fmt::format("pair ({},{}) outside graph of {} vertices",
                                        pair.first, pair.second, adjacency_.size()));
  }
  const auto [it, inserted] =
      tested_.emplace(pair.Key(), outcome.matched ? std::int64_t{outcome.inliers} : kNonEdge);
  if (!inserted) {
    throw PreconditionError(fmt::format("pair ({},{}) was already tested", pair.first, pair.second));
  }
  if (outcome.matched) {
    adjacency_[pair.first].push_back(pair.second);
    adjacency_[pair.second].push_back(pair.first);
    ++num_edges_;
  }
}

bool MatchGraph::HasEdge(ImagePair pair) const { return Inliers(pair).has_value(); }

std::optional<std::uint32_t> MatchGraph::Inliers(ImagePair pair) const {
  const auto it = tested_.find(ImagePair::Make(pair.first, pair.second).Key());
  if (it == tested_.end() || it->second == kNonEdge) return std::nullopt;
  return static_cast<std::uint32_t>(it->second);
}

std::vector<Edge> MatchGraph::SortedEdges() const {
  std::vector<Edge> edges;
  edges.reserve(num_edges_);
  for (const auto& [key, inliers] : tested_) {
    if (inliers != kNonEdge) {
      edges.push_back({ImagePair::FromKey(key), static_cast<std::uint32_t>(inliers)});
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& x, const Edge& y) { return x.pair < y.pair; });
  return edges;
}

std::vector<ImagePair> MatchGraph::SortedNonEdges() const {
  std::vector<ImagePair> pairs;
  pairs.reserve(tested_.size() - num_edges_);
  for (const auto& [key, inliers] : tested_) {
    if (inliers == kNonEdge) pairs.push_back(ImagePair::FromKey(key));
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::optional<std::uint32_t> ModifiedGraphDistance(const MatchGraph& graph, ImageId a, ImageId b) {
  if (a == b) throw PreconditionError("modified graph distance needs two distinct vertices");
  if (a >= graph.num_vertices() || b >= graph.num_vertices()) {
    throw PreconditionError("vertex outside graph");
  }
  const auto dist = BreadthFirst(graph, a, b, b);
  if (dist[b] == kUnreached) return std::nullopt;
  return dist[b];
}

std::uint64_t GraphDistanceStats::TotalEdges() const {
  std::uint64_t total = unreachable_edges;
  for (const auto& [d, count] : edge_counts) total += count;
  return total;
}

std::uint64_t GraphDistanceStats::TotalNonEdges() const {
  std::uint64_t total = unreachable_nonedges;
  for (const auto& [d, count] : nonedge_counts) total += count;
  return total;
}

std::optional<double> GraphDistanceStats::EdgeProbability(std::uint32_t lo, std::uint32_t hi) const {
  std::uint64_t edges = 0;
  std::uint64_t nonedges = 0;
  for (const auto& [d, count] : edge_counts) {
    if (d >= lo && d <= hi) edges += count;
  }
  for (const auto& [d, count] : nonedge_counts) {
    if (d >= lo && d <= hi) nonedges += count;
  }
  if (hi == std::numeric_limits<std::uint32_t>::max()) {
    edges += unreachable_edges;
    nonedges += unreachable_nonedges;
  }
  if (edges + nonedges == 0) return std::nullopt;
  return static_cast<double>(edges) / static_cast<double>(edges + nonedges);
}

namespace {

std::map<std::uint32_t, double> Normalize(const std::map<std::uint32_t, std::uint64_t>& counts,
                                          std::uint64_t total) {
  std::map<std::uint32_t, double> pmf;
  if (total == 0) return pmf;
  for (const auto& [d, count] : counts) {
    pmf[d] = static_cast<double>(count) / static_cast<double>(total);
  }
  return pmf;
}

}  // namespace

std::map<std::uint32_t, double> GraphDistanceStats::EdgePmf() const {
  return Normalize(edge_counts, TotalEdges());
}

std::map<std::uint32_t, double> GraphDistanceStats::NonEdgePmf() const {
  return Normalize(nonedge_counts, TotalNonEdges());
}

GraphDistanceStats ComputeGraphDistanceStats(const MatchGraph& graph,
                                             const std::vector<Edge>& truth) {
  const std::size_t n = graph.num_vertices();
  std::unordered_set<std::uint64_t> truth_keys;
  for (const Edge& edge : truth) truth_keys.insert(edge.pair.Key());

  GraphDistanceStats stats;
  std::vector<char> is_neighbor(n, 0);
  for (ImageId a = 0; a < n; ++a) {
    const auto dist = BreadthFirst(graph, a);
    for (ImageId w : graph.Neighbors(a)) is_neighbor[w] = 1;
    for (ImageId b = a + 1; b < n; ++b) {
      std::uint32_t d = dist[b];
      if (is_neighbor[b]) {
        // Direct edge removed: 2 via any common neighbor, otherwise search.
        const auto& nb = graph.Neighbors(b);
        const bool common = std::any_of(nb.begin(), nb.end(),
                                        [&](ImageId w) { return is_neighbor[w] != 0; });
        d = common ? 2 : BreadthFirst(graph, a, b, b)[b];
      }
      const bool is_edge = truth_keys.contains(ImagePair{a, b}.Key());
      if (d == kUnreached) {
        ++(is_edge ? stats.unreachable_edges : stats.unreachable_nonedges);
      } else {
        ++(is_edge ? stats.edge_counts : stats.nonedge_counts)[d];
      }
    }
    for (ImageId w : graph.Neighbors(a)) is_neighbor[w] = 0;
  }
  return stats;
}

std::vector<Triplet> ExtractTriplets(const MatchGraph& graph) {
  std::vector<Triplet> triplets;
  for (ImageId b = 0; b < graph.num_vertices(); ++b) {
    std::vector<ImageId> nb = graph.Neighbors(b);
    std::sort(nb.begin(), nb.end());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (!graph.IsTested(ImagePair{nb[i], nb[j]})) triplets.push_back({nb[i], b, nb[j]});
      }
    }
  }
  std::sort(triplets.begin(), triplets.end());
  return triplets;
}

void WriteEdgeList(const std::filesystem::path& path, std::size_t num_vertices,
                   const std::vector<Edge>& edges) {
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end(),
            [](const Edge& x, const Edge& y) { return x.pair < y.pair; });
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot open {} for writing", path.string()));
  out << "# N " << num_vertices << '\n';
  for (const Edge& e : sorted) {
    out << e.pair.first << ' ' << e.pair.second << ' ' << e.inliers << '\n';
  }
  if (!out) throw DataError(fmt::format("write failed: {}", path.string()));
}

EdgeListFile ReadEdgeList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  EdgeListFile file;
  std::string line;
  std::size_t line_number = 0;
  bool have_header = false;
  std::unordered_set<std::uint64_t> seen;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (!have_header) {
      std::string hash, tag;
      if (!(fields >> hash >> tag >> file.num_vertices) || hash != "#" || tag != "N") {
        FailLine(path, line_number, "expected header '# N <count>'");
      }
      have_header = true;
      continue;
    }
    std::uint64_t i, j, inliers;
    std::string extra;
    if (!(fields >> i >> j >> inliers) || (fields >> extra)) {
      FailLine(path, line_number, "expected '<i> <j> <inliers>'");
    }
    if (i >= j || j >= file.num_vertices || inliers > std::numeric_limits<std::uint32_t>::max()) {
      FailLine(path, line_number, "edge must satisfy i < j < N");
    }
    const ImagePair pair{static_cast<ImageId>(i), static_cast<ImageId>(j)};
    if (!seen.insert(pair.Key()).second) FailLine(path, line_number, "duplicate edge");
    file.edges.push_back({pair, static_cast<std::uint32_t>(inliers)});
  }
  if (!have_header) throw DataError(fmt::format("{}: missing '# N' header", path.string()));
  return file;
}

void WritePairList(const std::filesystem::path& path, const std::vector<ImagePair>& pairs) {
  std::vector<ImagePair> sorted = pairs;
  std::sort(sorted.begin(), sorted.end());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot open {} for writing", path.string()));
  for (const ImagePair& p : sorted) out << p.first << ' ' << p.second << '\n';
  if (!out) throw DataError(fmt::format("write failed: {}", path.string()));
}

std::vector<ImagePair> ReadPairList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::vector<ImagePair> pairs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::uint64_t i, j;
    std::string extra;
    if (!(fields >> i >> j) || (fields >> extra) || i >= j ||
        j > std::numeric_limits<ImageId>::max()) {
      FailLine(path, line_number, "expected '<i> <j>' with i < j");
    }
    pairs.push_back({static_cast<ImageId>(i), static_cast<ImageId>(j)});
  }
  return pairs;
}

}  // namespace graphmatch
