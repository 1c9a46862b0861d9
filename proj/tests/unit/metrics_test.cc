#include <gtest/gtest.h>

#include <fstream>

#include "graphmatch/error.h"
#include "graphmatch/metrics.h"
#include "test_support.h"

namespace graphmatch {
namespace {

RunMetrics Sample() {
  RunMetrics m(0.5);
  m.Append(1, Stage::kSampling, 10, 2);
  m.Append(1, Stage::kPropagation, 4, 3);
  m.Append(2, Stage::kSampling, 6, 1);
  return m;
}

TEST(RunMetricsTest, CumulativeFieldsAndEfficiencies) {
  const RunMetrics m = Sample();
  ASSERT_EQ(m.records().size(), 3u);
  EXPECT_EQ(m.records()[2].cum_tested, 20u);
  EXPECT_EQ(m.records()[2].cum_matched, 6u);
  EXPECT_DOUBLE_EQ(m.records()[1].sim_time, 7.0);
  EXPECT_DOUBLE_EQ(m.records()[1].efficiency(), 5.0 / 14.0);
  EXPECT_DOUBLE_EQ(*m.Efficiency(), 0.3);
  EXPECT_DOUBLE_EQ(*m.StageEfficiency(Stage::kSampling), 3.0 / 16.0);
  EXPECT_DOUBLE_EQ(*m.StageEfficiency(Stage::kPropagation), 0.75);
  EXPECT_FALSE(m.StageEfficiency(Stage::kRandom).has_value());
  EXPECT_EQ(m.StageTested(Stage::kSampling), 16u);
  EXPECT_EQ(m.StageMatched(Stage::kPropagation), 3u);
  EXPECT_FALSE(RunMetrics().Efficiency().has_value());
}

TEST(RunMetricsTest, MatchedAtBudgetInterpolates) {
  const RunMetrics m = Sample();
  EXPECT_DOUBLE_EQ(m.MatchedAtBudget(0), 0.0);
  EXPECT_DOUBLE_EQ(m.MatchedAtBudget(5), 1.0);
  EXPECT_DOUBLE_EQ(m.MatchedAtBudget(10), 2.0);
  EXPECT_DOUBLE_EQ(m.MatchedAtBudget(12), 3.5);
  EXPECT_DOUBLE_EQ(m.MatchedAtBudget(1000), 6.0);
}

TEST(RunMetricsCsvTest, RoundTrip) {
  testing::TempDir dir;
  const RunMetrics m = Sample();
  WriteMetricsCsv(m, dir / "metrics.csv");
  const auto records = ReadMetricsCsv(dir / "metrics.csv");
  ASSERT_EQ(records.size(), m.records().size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].iteration, m.records()[i].iteration);
    EXPECT_EQ(records[i].stage, m.records()[i].stage);
    EXPECT_EQ(records[i].tested, m.records()[i].tested);
    EXPECT_EQ(records[i].cum_matched, m.records()[i].cum_matched);
    EXPECT_DOUBLE_EQ(records[i].sim_time, m.records()[i].sim_time);
  }
  EXPECT_EQ(testing::ReadFile(dir / "metrics.csv").substr(0, 9), "iteration");
}

TEST(RunMetricsCsvTest, MalformedRejected) {
  testing::TempDir dir;
  { std::ofstream(dir / "a.csv") << "wrong,header\n"; }
  EXPECT_THROW(ReadMetricsCsv(dir / "a.csv"), DataError);
  {
    std::ofstream(dir / "b.csv")
        << "iteration,stage,tested,matched,cum_tested,cum_matched,efficiency,sim_time\n"
        << "1,warp,3,1,3,1,0.3,3\n";
  }
  EXPECT_THROW(ReadMetricsCsv(dir / "b.csv"), DataError);
}

TEST(StageTest, NamesRoundTrip) {
  for (Stage s : {Stage::kSampling, Stage::kPropagation, Stage::kBruteForce, Stage::kRandom,
                  Stage::kRetrieval, Stage::kExpansion}) {
    EXPECT_EQ(ParseStage(StageName(s)), s);
  }
}

}  // namespace
}  // namespace graphmatch
