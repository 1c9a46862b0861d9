#include "graphmatch/fisher.h"

#include <cmath>

#include <fmt/format.h>

#include "binary_io.h"
#include "graphmatch/error.h"
#include "graphmatch/parallel.h"

namespace graphmatch {
namespace {

constexpr char kMagic[] = "GMFV";
constexpr std::uint32_t kVersion = 1;

void CheckEncodable(const GmmModel& model, const DescriptorSet& descriptors) {
  if (descriptors.dim() != model.dim()) {
    throw PreconditionError(fmt::format("image {} has dim {}, model dim is {}",
                                        descriptors.image_id, descriptors.dim(), model.dim()));
  }
  if (descriptors.feature_count() == 0) {
    throw PreconditionError(fmt::format("image {} has no features", descriptors.image_id));
  }
}

}  // namespace

std::string_view EncoderName(EncoderKind kind) {
  return kind == EncoderKind::kFisher ? "fisher" : "vlad";
}

EncoderKind ParseEncoderKind(std::string_view name) {
  if (name == "fisher") return EncoderKind::kFisher;
  if (name == "vlad") return EncoderKind::kVlad;
  throw PreconditionError(fmt::format("unknown encoder '{}'", name));
}

std::size_t EncodedLength(EncoderKind kind, const GmmModel& model) {
  const auto base = static_cast<std::size_t>(model.num_components() * model.dim());
  return kind == EncoderKind::kFisher ? 2 * base : base;
}

Eigen::VectorXd EncodeFisherRaw(const GmmModel& model, const DescriptorSet& descriptors) {
  CheckEncodable(model, descriptors);
  const int k_count = model.num_components();
  const int dim = model.dim();
  const GmmScorer scorer(model);
  const Eigen::MatrixXd sigma = model.variances.cwiseSqrt();

  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * k_count * dim);
  std::vector<double> x(static_cast<std::size_t>(dim));
  std::vector<double> gamma(static_cast<std::size_t>(k_count));
  for (Eigen::Index r = 0; r < descriptors.rows.rows(); ++r) {
    for (int d = 0; d < dim; ++d) x[static_cast<std::size_t>(d)] = descriptors.rows(r, d);
    scorer.Posteriors(x, gamma);
    for (int k = 0; k < k_count; ++k) {
      const double g = gamma[static_cast<std::size_t>(k)];
      if (g == 0.0) continue;
      double* mean_block = out.data() + 2 * k * dim;
      double* var_block = mean_block + dim;
      for (int d = 0; d < dim; ++d) {
        const double u = (x[static_cast<std::size_t>(d)] - model.means(k, d)) / sigma(k, d);
        mean_block[d] += g * u;
        var_block[d] += g * (u * u - 1.0);
      }
    }
  }

  const auto f = static_cast<double>(descriptors.feature_count());
  for (int k = 0; k < k_count; ++k) {
    const double w = model.weights[k];
    out.segment(2 * k * dim, dim) /= f * std::sqrt(w);
    out.segment(2 * k * dim + dim, dim) /= f * std::sqrt(2.0 * w);
  }
  return out;
}

Eigen::VectorXd EncodeVladRaw(const GmmModel& model, const DescriptorSet& descriptors) {
  CheckEncodable(model, descriptors);
  const int k_count = model.num_components();
  const int dim = model.dim();
  const GmmScorer scorer(model);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(k_count * dim);
  std::vector<double> x(static_cast<std::size_t>(dim));
  std::vector<double> joint(static_cast<std::size_t>(k_count));
  for (Eigen::Index r = 0; r < descriptors.rows.rows(); ++r) {
    for (int d = 0; d < dim; ++d) x[static_cast<std::size_t>(d)] = descriptors.rows(r, d);
    scorer.LogJoint(x, joint);
    // argmax of the posterior; lowest index wins ties.
    int best = 0;
    for (int k = 1; k < k_count; ++k) {
      if (joint[static_cast<std::size_t>(k)] > joint[static_cast<std::size_t>(best)]) best = k;
    }
    for (int d = 0; d < dim; ++d) {
      out[best * dim + d] += x[static_cast<std::size_t>(d)] - model.means(best, d);
    }
  }
  return out;
}

Eigen::VectorXd ApplyImprovedNormalization(const Eigen::VectorXd& raw) {
  if (!raw.allFinite()) throw PreconditionError("cannot normalize a non-finite vector");
  Eigen::VectorXd out = raw.unaryExpr([](double z) {
    return z < 0.0 ? -std::sqrt(-z) : std::sqrt(z);
  });
  const double norm = out.norm();
  if (norm > 0.0) out /= norm;
  return out;
}

FisherVector EncodeFisher(const GmmModel& model, const DescriptorSet& descriptors) {
  return {descriptors.image_id, ApplyImprovedNormalization(EncodeFisherRaw(model, descriptors))};
}

VladVector EncodeVlad(const GmmModel& model, const DescriptorSet& descriptors) {
  return {descriptors.image_id, ApplyImprovedNormalization(EncodeVladRaw(model, descriptors))};
}

VectorStore EncodeCollection(const GmmModel& model, const Collection& collection,
                             EncoderKind kind, int num_threads) {
  VectorStore store;
  const auto length = static_cast<Eigen::Index>(EncodedLength(kind, model));
  store.values.resize(static_cast<Eigen::Index>(collection.size()), length);
  ParallelFor(collection.size(), num_threads, [&](std::size_t i) {
    const DescriptorSet& image = collection.ById(static_cast<ImageId>(i));
    const GlobalVector encoded =
        kind == EncoderKind::kFisher ? EncodeFisher(model, image) : EncodeVlad(model, image);
    if (encoded.values.size() != length) {
      throw std::logic_error("encoded vector length disagrees with the dimension law");
    }
    store.values.row(static_cast<Eigen::Index>(i)) = encoded.values.cast<float>().transpose();
  });
  return store;
}

void WriteVectorStore(const VectorStore& store, const std::filesystem::path& path) {
  internal::ByteWriter writer;
  writer.Magic(kMagic);
  writer.U32(kVersion);
  writer.U32(static_cast<std::uint32_t>(store.size()));
  writer.U32(static_cast<std::uint32_t>(store.dim()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    writer.U32(static_cast<std::uint32_t>(i));
    writer.F32s({store.values.data() + i * static_cast<std::size_t>(store.dim()),
                 static_cast<std::size_t>(store.dim())});
  }
  writer.Flush(path);
}

VectorStore LoadVectorStore(const std::filesystem::path& path) {
  auto reader = internal::ByteReader::FromFile(path);
  reader.ExpectMagic(kMagic);
  const std::size_t version_offset = reader.offset();
  if (const auto version = reader.U32("version"); version != kVersion) {
    reader.FailAt(version_offset, fmt::format("unsupported version {}", version));
  }
  const std::uint32_t n = reader.U32("N");
  const std::uint32_t dim = reader.U32("vec_dim");
  if (static_cast<std::uint64_t>(n) * (4 + 4ull * dim) != reader.remaining()) {
    reader.Fail(fmt::format("payload size {} does not match N={} vec_dim={}",
                            reader.remaining(), n, dim));
  }
  VectorStore store;
  store.values.resize(n, dim);
  std::vector<bool> seen(n, false);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::size_t record_offset = reader.offset();
    const std::uint32_t id = reader.U32("image_id");
    if (id >= n || seen[id]) {
      reader.FailAt(record_offset, fmt::format("invalid or duplicate image id {}", id));
    }
    seen[id] = true;
    for (std::uint32_t d = 0; d < dim; ++d) {
      const std::size_t value_offset = reader.offset();
      const float v = reader.F32("vector value");
      if (!std::isfinite(v)) reader.FailAt(value_offset, "non-finite vector value");
      store.values(id, d) = v;
    }
  }
  return store;
}

}  // namespace graphmatch
