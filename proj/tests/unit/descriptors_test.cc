#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>

#include "graphmatch/descriptors.h"
#include "graphmatch/error.h"
#include "graphmatch/random.h"
#include "test_support.h"

namespace graphmatch {
namespace {

using testing::RandomCollection;
using testing::TempDir;

void AppendU32(std::vector<char>& bytes, std::uint32_t v) {
  char raw[4];
  std::memcpy(raw, &v, 4);
  bytes.insert(bytes.end(), raw, raw + 4);
}

TEST(CollectionTest, WriteAndLoadTwoImages) {
  TempDir dir;
  const Collection c = RandomCollection(1, {3, 5}, 4);
  WriteCollection(c, dir / "c.gmds");
  const Collection back = LoadCollection(dir / "c.gmds");
  EXPECT_EQ(back.size(), 2u);
  EXPECT_EQ(back.dim(), 4);
  EXPECT_EQ(back.FeatureCount(0), 3u);
  EXPECT_EQ(back.FeatureCount(1), 5u);
  EXPECT_EQ(back, c);
}

TEST(CollectionTest, RoundTripRandomCollections) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.UniformInt(8);
    std::vector<std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) counts.push_back(rng.UniformInt(20));
    const int dim = 1 + static_cast<int>(rng.UniformInt(16));
    const Collection c = RandomCollection(100 + trial, counts, dim);
    EXPECT_EQ(ParseCollection(SerializeCollection(c)), c);
  }
}

TEST(CollectionTest, ZeroFeatureImageRoundTrips) {
  const Collection c = RandomCollection(2, {0, 4}, 3);
  const Collection back = ParseCollection(SerializeCollection(c));
  EXPECT_EQ(back.FeatureCount(0), 0u);
  EXPECT_EQ(back, c);
}

TEST(CollectionTest, ImageOrderIsPreservedAndIdsAreLookups) {
  Collection base = RandomCollection(3, {2, 3, 4}, 2);
  std::vector<DescriptorSet> shuffled = {base.images()[2], base.images()[0], base.images()[1]};
  const Collection c(shuffled, 2);
  EXPECT_EQ(c.images()[0].image_id, 2u);
  EXPECT_EQ(c.FeatureCount(2), 4u);
  EXPECT_EQ(c.FeatureCounts(), (std::vector<std::uint32_t>{2, 3, 4}));
  EXPECT_EQ(ParseCollection(SerializeCollection(c)), c);
}

TEST(CollectionTest, RejectsDimMismatch) {
  std::vector<DescriptorSet> images(2);
  images[0].image_id = 0;
  images[0].rows = DescriptorMatrix::Zero(2, 3);
  images[1].image_id = 1;
  images[1].rows = DescriptorMatrix::Zero(2, 4);
  EXPECT_THROW(Collection(images, 3), PreconditionError);
}

TEST(CollectionTest, RejectsDuplicateOrSparseIds) {
  std::vector<DescriptorSet> images(2);
  images[0].rows = DescriptorMatrix::Zero(1, 2);
  images[1].rows = DescriptorMatrix::Zero(1, 2);
  images[0].image_id = 1;
  images[1].image_id = 1;
  EXPECT_THROW(Collection(images, 2), PreconditionError);
  images[1].image_id = 5;
  EXPECT_THROW(Collection(images, 2), PreconditionError);
}

TEST(CollectionTest, RejectsNonFiniteValues) {
  std::vector<DescriptorSet> images(1);
  images[0].rows = DescriptorMatrix::Zero(2, 2);
  images[0].rows(1, 1) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(Collection(images, 2), PreconditionError);
}

TEST(CollectionParseTest, EmptyFileIsHeaderError) {
  TempDir dir;
  { std::ofstream(dir / "empty.gmds"); }
  try {
    LoadCollection(dir / "empty.gmds");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("header"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("byte offset 0"), std::string::npos) << e.what();
  }
}

TEST(CollectionParseTest, TruncatedPayloadReportsOffset) {
  std::vector<char> bytes = SerializeCollection(RandomCollection(4, {3, 3}, 4));
  bytes.resize(bytes.size() - 5);
  try {
    ParseCollection(bytes);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos) << e.what();
  }
}

TEST(CollectionParseTest, TrailingBytesRejected) {
  std::vector<char> bytes = SerializeCollection(RandomCollection(4, {1}, 2));
  bytes.push_back(0);
  EXPECT_THROW(ParseCollection(bytes), DataError);
}

TEST(CollectionParseTest, BadVersionAndNonFiniteRejected) {
  const std::vector<char> good = SerializeCollection(RandomCollection(5, {1}, 1));
  std::vector<char> bad_version = good;
  bad_version[4] = 9;
  EXPECT_THROW(ParseCollection(bad_version), DataError);

  std::vector<char> nan_value = good;
  const float nan = std::numeric_limits<float>::infinity();
  std::memcpy(nan_value.data() + nan_value.size() - 4, &nan, 4);
  EXPECT_THROW(ParseCollection(nan_value), DataError);
}

TEST(CollectionParseTest, MixedDimsInFileRejected) {
  const std::vector<char> header = SerializeCollection(Collection({}, 1));
  std::vector<char> bytes(header.begin(), header.begin() + 8);  // magic + version
  AppendU32(bytes, 2);
  for (std::uint32_t id : {0u, 1u}) {
    const std::uint32_t dim = 2 + id;
    AppendU32(bytes, id);
    AppendU32(bytes, 1);
    AppendU32(bytes, dim);
    for (std::uint32_t d = 0; d < dim; ++d) AppendU32(bytes, 0);
  }
  try {
    ParseCollection(bytes);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("dim 3 differs"), std::string::npos) << e.what();
  }
}

TEST(SampleFeaturesTest, TakesMinOfBudgetAndCount) {
  const Collection c = RandomCollection(6, {3, 2000, 0}, 2);
  const DescriptorMatrix s = SampleFeatures(c, 1000, 1);
  EXPECT_EQ(s.rows(), 3 + 1000);
  // All three rows of the small image are included.
  std::multiset<std::pair<float, float>> small;
  for (int r = 0; r < 3; ++r) small.insert({c.ById(0).rows(r, 0), c.ById(0).rows(r, 1)});
  std::multiset<std::pair<float, float>> sampled;
  for (int r = 0; r < 3; ++r) sampled.insert({s(r, 0), s(r, 1)});
  EXPECT_EQ(small, sampled);
}

TEST(SampleFeaturesTest, DrawsWithoutReplacement) {
  const Collection c = RandomCollection(7, {50}, 3);
  const DescriptorMatrix s = SampleFeatures(c, 30, 9);
  std::set<float> firsts;
  for (Eigen::Index r = 0; r < s.rows(); ++r) firsts.insert(s(r, 0));
  EXPECT_EQ(firsts.size(), 30u);
}

TEST(SampleFeaturesTest, DeterministicPerSeed) {
  const Collection c = RandomCollection(8, {40, 40}, 3);
  EXPECT_EQ(SampleFeatures(c, 10, 5), SampleFeatures(c, 10, 5));
  EXPECT_NE(SampleFeatures(c, 10, 5), SampleFeatures(c, 10, 6));
}

TEST(SampleFeaturesTest, ImageDrawIndependentOfOtherImages) {
  const Collection both = RandomCollection(9, {40, 40}, 3);
  std::vector<DescriptorSet> swapped = {both.images()[1], both.images()[0]};
  const Collection reordered(swapped, 3);
  const DescriptorMatrix a = SampleFeatures(both, 10, 3);
  const DescriptorMatrix b = SampleFeatures(reordered, 10, 3);
  EXPECT_EQ(a.topRows(10), b.bottomRows(10));
  EXPECT_EQ(a.bottomRows(10), b.topRows(10));
}

TEST(SampleFeaturesTest, RejectsNonPositiveBudget) {
  EXPECT_THROW(SampleFeatures(RandomCollection(1, {2}, 2), 0, 1), PreconditionError);
}

}  // namespace
}  // namespace graphmatch
