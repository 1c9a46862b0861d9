#include "graphmatch/gmm.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "graphmatch/error.h"
#include "graphmatch/parallel.h"
#include "graphmatch/random.h"

namespace graphmatch {
namespace {

constexpr std::size_t kChunkRows = 1024;
constexpr double kMinVariance = 1e-12;
constexpr double kMinWeight = 1e-12;
const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

double LogSumExp(std::span<const double> values) {
  double max_value = -std::numeric_limits<double>::infinity();
  for (double v : values) max_value = std::max(max_value, v);
  if (!std::isfinite(max_value)) return max_value;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max_value);
  return max_value + std::log(sum);
}

template <typename Matrix>
void RowAsDouble(const Matrix& data, Eigen::Index row, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(data.cols()));
  for (Eigen::Index d = 0; d < data.cols(); ++d) {
    out[static_cast<std::size_t>(d)] = static_cast<double>(data(row, d));
  }
}

// Sufficient statistics of one chunk of rows.
struct ChunkStats {
  Eigen::VectorXd resp_sum;
  Eigen::MatrixXd first_moment;
  Eigen::MatrixXd second_moment;
  double log_likelihood = 0.0;

  ChunkStats(int k, int dim)
      : resp_sum(Eigen::VectorXd::Zero(k)),
        first_moment(Eigen::MatrixXd::Zero(k, dim)),
        second_moment(Eigen::MatrixXd::Zero(k, dim)) {}

  void Add(const ChunkStats& other) {
    resp_sum += other.resp_sum;
    first_moment += other.first_moment;
    second_moment += other.second_moment;
    log_likelihood += other.log_likelihood;
  }
};

ChunkStats EStep(const GmmScorer& scorer, const DescriptorMatrix& data,
                 int num_threads) {
  const int k = scorer.model().num_components();
  const int dim = scorer.model().dim();
  const auto rows = static_cast<std::size_t>(data.rows());
  const std::size_t chunks = NumChunks(rows, kChunkRows);
  std::vector<ChunkStats> partial(chunks, ChunkStats(k, dim));

  ParallelFor(chunks, num_threads, [&](std::size_t c) {
    ChunkStats& stats = partial[c];
    std::vector<double> x;
    std::vector<double> gamma(static_cast<std::size_t>(k));
    const std::size_t end = std::min(rows, (c + 1) * kChunkRows);
    for (std::size_t r = c * kChunkRows; r < end; ++r) {
      RowAsDouble(data, static_cast<Eigen::Index>(r), x);
      stats.log_likelihood += scorer.Posteriors(x, gamma);
      for (int j = 0; j < k; ++j) {
        const double g = gamma[static_cast<std::size_t>(j)];
        if (g == 0.0) continue;
        stats.resp_sum[j] += g;
        for (int d = 0; d < dim; ++d) {
          const double v = x[static_cast<std::size_t>(d)];
          stats.first_moment(j, d) += g * v;
          stats.second_moment(j, d) += g * v * v;
        }
      }
    }
  });

  // Reduce in chunk order so the result is independent of num_threads.
  ChunkStats total(k, dim);
  for (const auto& stats : partial) total.Add(stats);
  return total;
}

GmmModel MStep(const ChunkStats& stats, const GmmModel& previous,
               const Eigen::VectorXd& floors, double num_rows) {
  GmmModel next = previous;
  const int k = previous.num_components();
  for (int j = 0; j < k; ++j) {
    const double mass = stats.resp_sum[j];
    next.weights[j] = std::max(mass / num_rows, kMinWeight);
    if (mass <= kMinWeight * num_rows) continue;  // starved: keep mean/variance
    for (int d = 0; d < previous.dim(); ++d) {
      const double mean = stats.first_moment(j, d) / mass;
      const double var = stats.second_moment(j, d) / mass - mean * mean;
      next.means(j, d) = mean;
      next.variances(j, d) = std::max(var, floors[d]);
    }
  }
  next.weights /= next.weights.sum();
  return next;
}

// k-means++ seeding: first center uniform, then proportional to squared
// distance to the nearest chosen center.
Eigen::MatrixXd SeedCenters(const DescriptorMatrix& data, int k, Rng& rng) {
  const Eigen::Index n = data.rows();
  const Eigen::Index dim = data.cols();
  Eigen::MatrixXd centers(k, dim);
  std::vector<double> nearest(static_cast<std::size_t>(n),
                              std::numeric_limits<double>::infinity());
  Eigen::Index chosen = static_cast<Eigen::Index>(rng.UniformInt(static_cast<std::uint64_t>(n)));
  for (int c = 0; c < k; ++c) {
    for (Eigen::Index d = 0; d < dim; ++d) centers(c, d) = data(chosen, d);
    double total = 0.0;
    for (Eigen::Index r = 0; r < n; ++r) {
      double dist = 0.0;
      for (Eigen::Index d = 0; d < dim; ++d) {
        const double diff = static_cast<double>(data(r, d)) - centers(c, d);
        dist += diff * diff;
      }
      auto& best = nearest[static_cast<std::size_t>(r)];
      best = std::min(best, dist);
      total += best;
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      chosen = static_cast<Eigen::Index>(rng.UniformInt(static_cast<std::uint64_t>(n)));
      continue;
    }
    const double target = rng.Uniform() * total;
    double running = 0.0;
    chosen = n - 1;
    for (Eigen::Index r = 0; r < n; ++r) {
      running += nearest[static_cast<std::size_t>(r)];
      if (running > target) {
        chosen = r;
        break;
      }
    }
  }
  return centers;
}

}  // namespace

bool operator==(const GmmModel& a, const GmmModel& b) {
  return a.weights.size() == b.weights.size() && a.means.rows() == b.means.rows() &&
         a.means.cols() == b.means.cols() && a.variances.rows() == b.variances.rows() &&
         a.variances.cols() == b.variances.cols() && a.weights == b.weights &&
         a.means == b.means && a.variances == b.variances;
}

GmmScorer::GmmScorer(const GmmModel& model)
    : model_(model),
      inv_variances_(model.variances.cwiseInverse()),
      log_normalizers_(model.num_components()) {
  for (int k = 0; k < model.num_components(); ++k) {
    double log_det = 0.0;
    for (int d = 0; d < model.dim(); ++d) log_det += std::log(model.variances(k, d));
    log_normalizers_[k] =
        std::log(model.weights[k]) - 0.5 * (model.dim() * kLogTwoPi + log_det);
  }
}

void GmmScorer::LogJoint(std::span<const double> x, std::span<double> out) const {
  for (int k = 0; k < model_.num_components(); ++k) {
    double mahalanobis = 0.0;
    for (int d = 0; d < model_.dim(); ++d) {
      const double diff = x[static_cast<std::size_t>(d)] - model_.means(k, d);
      mahalanobis += diff * diff * inv_variances_(k, d);
    }
    out[static_cast<std::size_t>(k)] = log_normalizers_[k] - 0.5 * mahalanobis;
  }
}

double GmmScorer::Posteriors(std::span<const double> x, std::span<double> out) const {
  LogJoint(x, out);
  const double log_px = LogSumExp(out);
  for (double& v : out) v = std::exp(v - log_px);
  return log_px;
}

GmmModel TrainGmm(const DescriptorMatrix& data, const EmConfig& cfg, EmTrace* trace) {
  const int k = cfg.num_components;
  if (k < 1) throw PreconditionError("GMM needs at least one component");
  if (!(cfg.tol > 0.0)) throw PreconditionError("EM tol must be positive");
  if (cfg.max_iters < 1) throw PreconditionError("EM max_iters must be positive");
  if (!(cfg.variance_floor > 0.0)) throw PreconditionError("variance_floor must be positive");
  if (data.rows() == 0) throw PreconditionError("GMM training data is empty");
  if (data.rows() < k) {
    throw PreconditionError(fmt::format("GMM training needs >= {} rows, got {}", k, data.rows()));
  }
  if (!data.allFinite()) throw PreconditionError("GMM training data has non-finite values");

  const auto n = static_cast<double>(data.rows());
  const int dim = static_cast<int>(data.cols());
  const Eigen::MatrixXd as_double = data.cast<double>();
  const Eigen::RowVectorXd data_mean = as_double.colwise().mean();
  const Eigen::RowVectorXd data_var =
      (as_double.rowwise() - data_mean).array().square().colwise().mean();
  Eigen::VectorXd floors(dim);
  for (int d = 0; d < dim; ++d) floors[d] = std::max(cfg.variance_floor * data_var[d], kMinVariance);

  Rng rng(cfg.seed);
  GmmModel model;
  model.weights = Eigen::VectorXd::Constant(k, 1.0 / k);
  model.means = SeedCenters(data, k, rng);
  model.variances.resize(k, dim);
  for (int j = 0; j < k; ++j) {
    for (int d = 0; d < dim; ++d) model.variances(j, d) = std::max(data_var[d], floors[d]);
  }

  double previous = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const ChunkStats stats = EStep(GmmScorer(model), data, cfg.num_threads);
    const double average = stats.log_likelihood / n;
    if (trace) trace->average_log_likelihood.push_back(average);
    if (iter > 0 && average - previous <= cfg.tol * std::abs(previous)) break;
    previous = average;
    model = MStep(stats, model, floors, n);
  }
  return model;
}

Eigen::VectorXd SoftAssign(const GmmModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.dim()) {
    throw PreconditionError(fmt::format("vector has dim {}, model dim is {}", x.size(), model.dim()));
  }
  Eigen::VectorXd gamma(model.num_components());
  GmmScorer(model).Posteriors(x, {gamma.data(), static_cast<std::size_t>(gamma.size())});
  return gamma;
}

Eigen::VectorXd SoftAssign(const GmmModel& model, std::span<const float> x) {
  std::vector<double> as_double(x.begin(), x.end());
  return SoftAssign(model, std::span<const double>(as_double));
}

namespace {

template <typename Matrix>
double LogLikelihoodImpl(const GmmModel& model, const Matrix& data) {
  if (data.cols() != model.dim()) {
    throw PreconditionError(fmt::format("data has dim {}, model dim is {}", data.cols(), model.dim()));
  }
  const GmmScorer scorer(model);
  std::vector<double> x;
  std::vector<double> joint(static_cast<std::size_t>(model.num_components()));
  double total = 0.0;
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    RowAsDouble(data, r, x);
    scorer.LogJoint(x, joint);
    total += LogSumExp(joint);
  }
  return total;
}

}  // namespace

double LogLikelihood(const GmmModel& model, const DescriptorMatrix& data) {
  return LogLikelihoodImpl(model, data);
}

double LogLikelihood(const GmmModel& model, const Eigen::MatrixXd& data) {
  return LogLikelihoodImpl(model, data);
}

std::string GmmModelToJson(const GmmModel& model) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["K"] = model.num_components();
  doc["dim"] = model.dim();
  doc["weights"] = std::vector<double>(model.weights.data(),
                                       model.weights.data() + model.weights.size());
  auto rows = [](const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(r)].push_back(m(r, c));
    }
    return out;
  };
  doc["means"] = rows(model.means);
  doc["variances"] = rows(model.variances);
  return doc.dump(1) + "\n";
}

GmmModel GmmModelFromJson(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("version").get<int>() != 1) throw DataError("unsupported GMM model version");
    const int k = doc.at("K").get<int>();
    const int dim = doc.at("dim").get<int>();
    if (k < 1 || dim < 1) throw DataError("GMM model has non-positive K or dim");
    GmmModel model;
    model.weights.resize(k);
    model.means.resize(k, dim);
    model.variances.resize(k, dim);
    const auto weights = doc.at("weights").get<std::vector<double>>();
    const auto means = doc.at("means").get<std::vector<std::vector<double>>>();
    const auto variances = doc.at("variances").get<std::vector<std::vector<double>>>();
    if (weights.size() != static_cast<std::size_t>(k) || means.size() != weights.size() ||
        variances.size() != weights.size()) {
      throw DataError("GMM model arrays disagree with K");
    }
    for (int j = 0; j < k; ++j) {
      const auto row = static_cast<std::size_t>(j);
      if (means[row].size() != static_cast<std::size_t>(dim) ||
          variances[row].size() != static_cast<std::size_t>(dim)) {
        throw DataError("GMM model rows disagree with dim");
      }
      model.weights[j] = weights[row];
      for (int d = 0; d < dim; ++d) {
        model.means(j, d) = means[row][static_cast<std::size_t>(d)];
        model.variances(j, d) = variances[row][static_cast<std::size_t>(d)];
        if (!(model.variances(j, d) > 0.0)) throw DataError("GMM variance must be positive");
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed GMM model: {}", e.what()));
  }
}

void SaveGmmModel(const GmmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot open {} for writing", path.string()));
  out << GmmModelToJson(model);
}

GmmModel LoadGmmModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return GmmModelFromJson(buffer.str());
}

}  // namespace graphmatch
