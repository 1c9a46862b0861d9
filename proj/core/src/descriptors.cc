#include "graphmatch/descriptors.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>

#include <fmt/format.h>

#include "binary_io.h"
#include "graphmatch/error.h"
#include "graphmatch/random.h"

namespace graphmatch {
namespace {

constexpr char kMagic[] = "GMDS";
constexpr std::uint32_t kVersion = 1;

}  // namespace

Collection::Collection(std::vector<DescriptorSet> images, int dim)
    : images_(std::move(images)), dim_(dim) {
  if (!images_.empty()) dim_ = images_.front().dim();
  if (dim_ <= 0 && !images_.empty()) {
    throw PreconditionError("descriptor dimensionality must be positive");
  }
  position_of_id_.assign(images_.size(), images_.size());
  for (std::size_t pos = 0; pos < images_.size(); ++pos) {
    const DescriptorSet& image = images_[pos];
    if (image.dim() != dim_) {
      throw PreconditionError(fmt::format(
          "image {} has dim {}, collection dim is {}", image.image_id, image.dim(), dim_));
    }
    if (image.image_id >= images_.size()) {
      throw PreconditionError(fmt::format(
          "image id {} outside dense range [0, {})", image.image_id, images_.size()));
    }
    if (position_of_id_[image.image_id] != images_.size()) {
      throw PreconditionError(fmt::format("duplicate image id {}", image.image_id));
    }
    if (!image.rows.allFinite()) {
      throw PreconditionError(fmt::format("image {} has non-finite values", image.image_id));
    }
    position_of_id_[image.image_id] = pos;
  }
}

std::vector<std::uint32_t> Collection::FeatureCounts() const {
  std::vector<std::uint32_t> counts(images_.size());
  for (const auto& image : images_) {
    counts[image.image_id] = static_cast<std::uint32_t>(image.feature_count());
  }
  return counts;
}

bool operator==(const Collection& a, const Collection& b) {
  if (a.dim_ != b.dim_ || a.images_.size() != b.images_.size()) return false;
  for (std::size_t i = 0; i < a.images_.size(); ++i) {
    const auto& x = a.images_[i];
    const auto& y = b.images_[i];
    if (x.image_id != y.image_id || x.rows.rows() != y.rows.rows()) return false;
    // Bitwise comparison: -0.0f and 0.0f must not compare equal here.
    if (std::memcmp(x.rows.data(), y.rows.data(), sizeof(float) * x.rows.size()) != 0) {
      return false;
    }
  }
  return true;
}

std::vector<char> SerializeCollection(const Collection& collection) {
  internal::ByteWriter writer;
  writer.Magic(kMagic);
  writer.U32(kVersion);
  writer.U32(static_cast<std::uint32_t>(collection.size()));
  for (const auto& image : collection.images()) {
    writer.U32(image.image_id);
    writer.U32(static_cast<std::uint32_t>(image.feature_count()));
    writer.U32(static_cast<std::uint32_t>(collection.dim()));
    writer.F32s({image.rows.data(), static_cast<std::size_t>(image.rows.size())});
  }
  return writer.bytes();
}

void WriteCollection(const Collection& collection, const std::filesystem::path& path) {
  const std::vector<char> bytes = SerializeCollection(collection);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot open {} for writing", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError(fmt::format("write failed: {}", path.string()));
}

Collection ParseCollection(std::vector<char> bytes, std::string source) {
  internal::ByteReader reader(std::move(bytes), std::move(source));
  reader.ExpectMagic(kMagic);
  const std::size_t version_offset = reader.offset();
  const std::uint32_t version = reader.U32("version");
  if (version != kVersion) {
    reader.FailAt(version_offset, fmt::format("unsupported version {}", version));
  }
  const std::uint32_t image_count = reader.U32("image_count");

  std::vector<DescriptorSet> images;
  std::vector<bool> seen(image_count, false);
  int dim = -1;
  for (std::uint32_t n = 0; n < image_count; ++n) {
    const std::size_t record_offset = reader.offset();
    DescriptorSet image;
    image.image_id = reader.U32("image_id");
    const std::uint32_t count = reader.U32("feature_count");
    const std::size_t dim_offset = reader.offset();
    const std::uint32_t image_dim = reader.U32("dim");
    if (image.image_id >= image_count) {
      reader.FailAt(record_offset, fmt::format("image id {} outside [0, {})",
                                               image.image_id, image_count));
    }
    if (seen[image.image_id]) {
      reader.FailAt(record_offset, fmt::format("duplicate image id {}", image.image_id));
    }
    seen[image.image_id] = true;
    if (image_dim == 0) reader.FailAt(dim_offset, "dim must be positive");
    if (dim < 0) dim = static_cast<int>(image_dim);
    if (static_cast<int>(image_dim) != dim) {
      reader.FailAt(dim_offset, fmt::format("dim {} differs from {}", image_dim, dim));
    }
    const std::uint64_t values = static_cast<std::uint64_t>(count) * image_dim;
    if (values * 4 > reader.remaining()) {
      reader.Fail(fmt::format("truncated payload: image {} needs {} bytes, {} left",
                              image.image_id, values * 4, reader.remaining()));
    }
    image.rows.resize(count, image_dim);
    float* out = image.rows.data();
    for (std::uint64_t v = 0; v < values; ++v) {
      const std::size_t value_offset = reader.offset();
      out[v] = reader.F32("descriptor value");
      if (!std::isfinite(out[v])) reader.FailAt(value_offset, "non-finite descriptor value");
    }
    images.push_back(std::move(image));
  }
  if (reader.remaining() != 0) reader.Fail("trailing bytes after last image");
  return Collection(std::move(images), std::max(dim, 0));
}

Collection LoadCollection(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return ParseCollection(std::move(bytes), path.string());
}

DescriptorMatrix SampleFeatures(const Collection& collection, int per_image,
                                std::uint64_t seed) {
  if (per_image < 1) throw PreconditionError("per_image must be >= 1");
  std::size_t total = 0;
  for (const auto& image : collection.images()) {
    total += std::min<std::size_t>(per_image, image.feature_count());
  }
  DescriptorMatrix out(static_cast<Eigen::Index>(total), collection.dim());

  Eigen::Index row = 0;
  std::vector<Eigen::Index> indices;
  for (const auto& image : collection.images()) {
    const auto count = static_cast<Eigen::Index>(image.feature_count());
    const Eigen::Index take = std::min<Eigen::Index>(per_image, count);
    indices.resize(static_cast<std::size_t>(count));
    std::iota(indices.begin(), indices.end(), 0);
    // Partial Fisher-Yates: the first `take` slots become the sample.
    Rng rng(DeriveSeed(seed, image.image_id));
    for (Eigen::Index i = 0; i < take; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng.UniformInt(count - i));
      std::swap(indices[i], indices[j]);
    }
    std::sort(indices.begin(), indices.begin() + take);
    for (Eigen::Index i = 0; i < take; ++i) out.row(row++) = image.rows.row(indices[i]);
  }
  return out;
}

}  // namespace graphmatch
