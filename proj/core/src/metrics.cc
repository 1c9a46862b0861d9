#include "graphmatch/metrics.h"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "graphmatch/error.h"

namespace graphmatch {

namespace {
constexpr char kHeader[] = "iteration,stage,tested,matched,cum_tested,cum_matched,efficiency,sim_time";
}  // namespace

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kSampling: return "sampling";
    case Stage::kPropagation: return "propagation";
    case Stage::kBruteForce: return "brute_force";
    case Stage::kRandom: return "random";
    case Stage::kRetrieval: return "retrieval";
    case Stage::kExpansion: return "expansion";
  }
  return "unknown";
}

Stage ParseStage(std::string_view name) {
  for (Stage s : {Stage::kSampling, Stage::kPropagation, Stage::kBruteForce, Stage::kRandom,
                  Stage::kRetrieval, Stage::kExpansion}) {
    if (StageName(s) == name) return s;
  }
  throw DataError(fmt::format("unknown stage '{}'", name));
}

void RunMetrics::Append(std::uint32_t iteration, Stage stage, std::uint64_t tested,
                        std::uint64_t matched) {
  if (matched > tested) throw std::logic_error("matched exceeds tested in a metrics record");
  IterationRecord record;
  record.iteration = iteration;
  record.stage = stage;
  record.tested = tested;
  record.matched = matched;
  record.cum_tested = total_tested() + tested;
  record.cum_matched = total_matched() + matched;
  record.sim_time = static_cast<double>(record.cum_tested) * cost_per_test_;
  records_.push_back(record);
}

std::optional<double> RunMetrics::Efficiency() const {
  if (total_tested() == 0) return std::nullopt;
  return static_cast<double>(total_matched()) / static_cast<double>(total_tested());
}

std::uint64_t RunMetrics::StageTested(Stage stage) const {
  std::uint64_t total = 0;
  for (const auto& r : records_) {
    if (r.stage == stage) total += r.tested;
  }
  return total;
}

std::uint64_t RunMetrics::StageMatched(Stage stage) const {
  std::uint64_t total = 0;
  for (const auto& r : records_) {
    if (r.stage == stage) total += r.matched;
  }
  return total;
}

std::optional<double> RunMetrics::StageEfficiency(Stage stage) const {
  const std::uint64_t tested = StageTested(stage);
  if (tested == 0) return std::nullopt;
  return static_cast<double>(StageMatched(stage)) / static_cast<double>(tested);
}

double RunMetrics::MatchedAtBudget(double budget) const {
  double prev_tested = 0.0;
  double prev_matched = 0.0;
  for (const auto& r : records_) {
    const auto tested = static_cast<double>(r.cum_tested);
    const auto matched = static_cast<double>(r.cum_matched);
    if (budget <= tested) {
      if (tested == prev_tested) return matched;
      const double t = (budget - prev_tested) / (tested - prev_tested);
      return prev_matched + t * (matched - prev_matched);
    }
    prev_tested = tested;
    prev_matched = matched;
  }
  return prev_matched;
}

std::string MetricsToCsv(const RunMetrics& metrics) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& r : metrics.records()) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", r.iteration, StageName(r.stage), r.tested,
                       r.matched, r.cum_tested, r.cum_matched, r.efficiency(), r.sim_time);
  }
  return out;
}

void WriteMetricsCsv(const RunMetrics& metrics, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot open {} for writing", path.string()));
  out << MetricsToCsv(metrics);
  if (!out) throw DataError(fmt::format("write failed: {}", path.string()));
}

std::vector<IterationRecord> ReadMetricsCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw DataError(fmt::format("{}: missing metrics header", path.string()));
  }
  std::vector<IterationRecord> records;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    if (cells.size() != 8) {
      throw DataError(fmt::format("{}:{}: expected 8 columns", path.string(), line_number));
    }
    try {
      IterationRecord r;
      r.iteration = static_cast<std::uint32_t>(std::stoul(cells[0]));
      r.stage = ParseStage(cells[1]);
      r.tested = std::stoull(cells[2]);
      r.matched = std::stoull(cells[3]);
      r.cum_tested = std::stoull(cells[4]);
      r.cum_matched = std::stoull(cells[5]);
      r.sim_time = std::stod(cells[7]);
      records.push_back(r);
    } catch (const std::logic_error&) {
      throw DataError(fmt::format("{}:{}: malformed number", path.string(), line_number));
    }
  }
  return records;
}

}  // namespace graphmatch
