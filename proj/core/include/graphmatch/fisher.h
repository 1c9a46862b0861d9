#ifndef GRAPHMATCH_FISHER_H_
#define GRAPHMATCH_FISHER_H_

#include <filesystem>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "graphmatch/descriptors.h"
#include "graphmatch/gmm.h"

namespace graphmatch {

enum class EncoderKind { kFisher, kVlad };

std::string_view EncoderName(EncoderKind kind);
EncoderKind ParseEncoderKind(std::string_view name);

// Global image descriptor. Fisher vectors have 2*K*dim values laid out per
// component as [mean block | variance block]; VLAD vectors have K*dim.
struct GlobalVector {
  ImageId image_id = 0;
  Eigen::VectorXd values;
};
using FisherVector = GlobalVector;
using VladVector = GlobalVector;

std::size_t EncodedLength(EncoderKind kind, const GmmModel& model);

// Unnormalized Fisher vector: per component k, the mean block
//   1/(F sqrt(w_k)) sum_x gamma_k(x) (x - mu_k) / sigma_k
// followed by the variance block
//   1/(F sqrt(2 w_k)) sum_x gamma_k(x) ((x - mu_k)^2 / sigma_k^2 - 1).
Eigen::VectorXd EncodeFisherRaw(const GmmModel& model, const DescriptorSet& descriptors);
// Hard-assignment residual sums, per component.
Eigen::VectorXd EncodeVladRaw(const GmmModel& model, const DescriptorSet& descriptors);

FisherVector EncodeFisher(const GmmModel& model, const DescriptorSet& descriptors);
VladVector EncodeVlad(const GmmModel& model, const DescriptorSet& descriptors);

// Signed square root per component, then L2 normalization. A zero vector is
// returned unchanged.
Eigen::VectorXd ApplyImprovedNormalization(const Eigen::VectorXd& raw);

// Encoded vectors of a whole collection; row i belongs to image i.
struct VectorStore {
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> values;

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

VectorStore EncodeCollection(const GmmModel& model, const Collection& collection,
                             EncoderKind kind, int num_threads = 1);

// GMFV file: magic, version, N, vec_dim, then N x (image_id, vec_dim f32).
void WriteVectorStore(const VectorStore& store, const std::filesystem::path& path);
VectorStore LoadVectorStore(const std::filesystem::path& path);

}  // namespace graphmatch

#endif  // GRAPHMATCH_FISHER_H_
