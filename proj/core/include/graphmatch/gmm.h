#ifndef GRAPHMATCH_GMM_H_
#define GRAPHMATCH_GMM_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graphmatch/descriptors.h"

namespace graphmatch {

// Diagonal-covariance Gaussian mixture. Rows of `means` and `variances` are
// components.
struct GmmModel {
  Eigen::VectorXd weights;
  Eigen::MatrixXd means;
  Eigen::MatrixXd variances;

  int num_components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }

  friend bool operator==(const GmmModel& a, const GmmModel& b);
};

struct EmConfig {
  int num_components = 16;
  int max_iters = 100;
  // Stop once the average log-likelihood improves by less than
  // tol * |previous average log-likelihood|.
  double tol = 1e-5;
  // Per-dimension variance floor, as a fraction of the training data's
  // variance in that dimension.
  double variance_floor = 1e-6;
  std::uint64_t seed = 0;
  int num_threads = 1;
};

// Per-iteration average log-likelihood of the parameters entering each E-step.
struct EmTrace {
  std::vector<double> average_log_likelihood;
};

// k-means++ seeding followed by EM. Deterministic in (data, cfg) regardless of
// cfg.num_threads.
GmmModel TrainGmm(const DescriptorMatrix& data, const EmConfig& cfg,
                  EmTrace* trace = nullptr);

// Precomputed per-component normalizers for repeated density evaluation.
class GmmScorer {
 public:
  explicit GmmScorer(const GmmModel& model);

  const GmmModel& model() const { return model_; }
  // log(w_k N(x; mu_k, sigma_k^2)) for every component.
  void LogJoint(std::span<const double> x, std::span<double> out) const;
  // Posterior responsibilities; returns log p(x).
  double Posteriors(std::span<const double> x, std::span<double> out) const;

 private:
  GmmModel model_;
  Eigen::MatrixXd inv_variances_;
  Eigen::VectorXd log_normalizers_;
};

Eigen::VectorXd SoftAssign(const GmmModel& model, std::span<const double> x);
Eigen::VectorXd SoftAssign(const GmmModel& model, std::span<const float> x);

// Sum over rows of log sum_k w_k N(x; mu_k, sigma_k^2).
double LogLikelihood(const GmmModel& model, const DescriptorMatrix& data);
double LogLikelihood(const GmmModel& model, const Eigen::MatrixXd& data);

std::string GmmModelToJson(const GmmModel& model);
GmmModel GmmModelFromJson(const std::string& text);
void SaveGmmModel(const GmmModel& model, const std::filesystem::path& path);
GmmModel LoadGmmModel(const std::filesystem::path& path);

}  // namespace graphmatch

#endif  // GRAPHMATCH_GMM_H_
