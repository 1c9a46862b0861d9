#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "graphmatch/error.h"
#include "graphmatch/pipeline.h"
#include "graphmatch/sim.h"
#include "test_support.h"

namespace graphmatch {
namespace {

TEST(SimTest, SameSeedSameWorld) {
  const SyntheticWorld a = GenerateWorld(testing::SmallWorld(3));
  const SyntheticWorld b = GenerateWorld(testing::SmallWorld(3));
  EXPECT_EQ(a.truth_edges, b.truth_edges);
  EXPECT_EQ(a.positions, b.positions);
  for (ImageId i = 0; i < 60; ++i) {
    EXPECT_TRUE(a.collection.ById(i).rows == b.collection.ById(i).rows);
  }
  const SyntheticWorld c = GenerateWorld(testing::SmallWorld(4));
  EXPECT_NE(a.positions, c.positions);
}

TEST(SimTest, EdgesFollowLinkRadius) {
  const SyntheticWorld w = GenerateWorld(testing::SmallWorld(5));
  const MatchGraph truth = MatchGraph::FromEdges(60, w.truth_edges);
  for (ImageId i = 0; i < 60; ++i) {
    for (ImageId j = i + 1; j < 60; ++j) {
      const double d = std::hypot(w.positions[i][0] - w.positions[j][0],
                                  w.positions[i][1] - w.positions[j][1]);
      EXPECT_EQ(truth.HasEdge({i, j}), d <= w.config.link_radius);
    }
  }
  for (const Edge& e : w.truth_edges) EXPECT_GE(e.inliers, 1u);
  EXPECT_TRUE(std::is_sorted(w.truth_edges.begin(), w.truth_edges.end(),
                             [](const Edge& a, const Edge& b) { return a.pair < b.pair; }));
}

TEST(SimTest, ZeroRadiusGivesNoEdges) {
  WorldConfig cfg = testing::SmallWorld(6);
  cfg.link_radius = 0.0;
  const SyntheticWorld w = GenerateWorld(cfg);
  EXPECT_TRUE(w.truth_edges.empty());
  EXPECT_EQ(w.density, 0.0);
}

TEST(SimTest, CoincidentNoiselessImagesHaveZeroPriorDistance) {
  WorldConfig cfg = testing::SmallWorld(7, 10);
  cfg.clusters = 1;
  cfg.cluster_spread = 0.0;
  cfg.descriptor_noise = 0.0;
  const SyntheticWorld w = GenerateWorld(cfg);
  EXPECT_EQ(w.truth_edges.size(), 45u);
  PreprocessConfig pc;
  pc.num_components = 2;
  const PriorIndex prior = Preprocess(w.collection, pc).prior;
  EXPECT_NEAR(prior.Distance(0, 9), 0.0, 1e-9);
}

TEST(SimTest, DefaultWorldIsSparse) {
  WorldConfig cfg;
  cfg.seed = 1;
  const SyntheticWorld w = GenerateWorld(cfg);
  EXPECT_EQ(w.collection.size(), 500u);
  EXPECT_GE(w.density, 0.01);
  EXPECT_LE(w.density, 0.05);
}

TEST(SimTest, EdgeDensity) {
  EXPECT_DOUBLE_EQ(EdgeDensity(5, 10), 1.0);
  EXPECT_DOUBLE_EQ(EdgeDensity(5, 0), 0.0);
  EXPECT_DOUBLE_EQ(EdgeDensity(5, 2), 0.2);
}

TEST(SimTest, RejectsBadConfig) {
  WorldConfig cfg;
  cfg.num_images = 1;
  EXPECT_THROW(GenerateWorld(cfg), PreconditionError);
  cfg = WorldConfig{};
  cfg.descriptor_noise = -1.0;
  EXPECT_THROW(GenerateWorld(cfg), PreconditionError);
  cfg = WorldConfig{};
  cfg.descriptor_dim = 0;
  EXPECT_THROW(GenerateWorld(cfg), PreconditionError);
}

TEST(SimTest, BundleRoundTrip) {
  testing::TempDir dir;
  const SyntheticWorld w = GenerateWorld(testing::SmallWorld(8));
  WriteWorldBundle(w, dir.path());
  const WorldBundle b = LoadWorldBundle(dir.path());
  EXPECT_EQ(b.truth_edges, w.truth_edges);
  EXPECT_EQ(b.collection.size(), 60u);
  EXPECT_EQ(b.config.seed, 8u);
  EXPECT_EQ(b.config.link_radius, w.config.link_radius);
  EXPECT_DOUBLE_EQ(b.density, w.density);
}

TEST(SimTest, BundleWithInconsistentTruthIsDataError) {
  testing::TempDir dir;
  const SyntheticWorld w = GenerateWorld(testing::SmallWorld(9));
  WriteWorldBundle(w, dir.path());
  {
    std::ofstream out(dir / "truth_edges.txt");
    out << "# N 61\n";
  }
  EXPECT_THROW(LoadWorldBundle(dir.path()), DataError);
}

}  // namespace
}  // namespace graphmatch
