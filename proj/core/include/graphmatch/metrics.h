#ifndef GRAPHMATCH_METRICS_H_
#define GRAPHMATCH_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace graphmatch {

enum class Stage { kSampling, kPropagation, kBruteForce, kRandom, kRetrieval, kExpansion };

std::string_view StageName(Stage stage);
Stage ParseStage(std::string_view name);

// One verified batch.
struct IterationRecord {
  std::uint32_t iteration = 0;
  Stage stage = Stage::kSampling;
  std::uint64_t tested = 0;
  std::uint64_t matched = 0;
  std::uint64_t cum_tested = 0;
  std::uint64_t cum_matched = 0;
  // Cumulative verification cost under the configured per-test cost.
  double sim_time = 0.0;

  double efficiency() const {
    return cum_tested == 0 ? 0.0 : static_cast<double>(cum_matched) / static_cast<double>(cum_tested);
  }
  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

class RunMetrics {
 public:
  explicit RunMetrics(double cost_per_test = 1.0) : cost_per_test_(cost_per_test) {}

  void Append(std::uint32_t iteration, Stage stage, std::uint64_t tested, std::uint64_t matched);

  const std::vector<IterationRecord>& records() const { return records_; }
  double cost_per_test() const { return cost_per_test_; }
  std::uint64_t total_tested() const { return records_.empty() ? 0 : records_.back().cum_tested; }
  std::uint64_t total_matched() const { return records_.empty() ? 0 : records_.back().cum_matched; }
  // Overall matched / tested; nullopt when nothing was tested.
  std::optional<double> Efficiency() const;
  std::optional<double> StageEfficiency(Stage stage) const;
  std::uint64_t StageTested(Stage stage) const;
  std::uint64_t StageMatched(Stage stage) const;
  // Cumulative matched after `budget` tests, interpolating linearly within a
  // batch. Budgets past the end return the final matched count.
  double MatchedAtBudget(double budget) const;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;

 private:
  double cost_per_test_;
  std::vector<IterationRecord> records_;
};

// CSV: iteration,stage,tested,matched,cum_tested,cum_matched,efficiency,sim_time
std::string MetricsToCsv(const RunMetrics& metrics);
void WriteMetricsCsv(const RunMetrics& metrics, const std::filesystem::path& path);
std::vector<IterationRecord> ReadMetricsCsv(const std::filesystem::path& path);

}  // namespace graphmatch

#endif  // GRAPHMATCH_METRICS_H_
