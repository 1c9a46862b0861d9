#ifndef GRAPHMATCH_DESCRIPTORS_H_
#define GRAPHMATCH_DESCRIPTORS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "graphmatch/types.h"

namespace graphmatch {

using DescriptorMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Local feature descriptors of one image, one row per feature.
struct DescriptorSet {
  ImageId image_id = 0;
  DescriptorMatrix rows;

  std::size_t feature_count() const { return static_cast<std::size_t>(rows.rows()); }
  int dim() const { return static_cast<int>(rows.cols()); }
};

// Immutable, validated set of per-image descriptors. Image ids are unique and
// dense in [0, N); images keep the order they were given in.
class Collection {
 public:
  Collection() = default;
  // Throws PreconditionError if any invariant is violated. `dim` is only
  // consulted when `images` is empty.
  explicit Collection(std::vector<DescriptorSet> images, int dim = 0);

  std::size_t size() const { return images_.size(); }
  int dim() const { return dim_; }
  const std::vector<DescriptorSet>& images() const { return images_; }
  const DescriptorSet& ById(ImageId id) const { return images_[position_of_id_.at(id)]; }
  std::size_t FeatureCount(ImageId id) const { return ById(id).feature_count(); }
  // Feature counts indexed by image id.
  std::vector<std::uint32_t> FeatureCounts() const;

  friend bool operator==(const Collection& a, const Collection& b);

 private:
  std::vector<DescriptorSet> images_;
  std::vector<std::size_t> position_of_id_;
  int dim_ = 0;
};

// Reads a GMDS descriptor file. Errors carry the byte offset of the fault.
Collection LoadCollection(const std::filesystem::path& path);
void WriteCollection(const Collection& collection, const std::filesystem::path& path);
// Serialized bytes of a collection, as written by WriteCollection.
std::vector<char> SerializeCollection(const Collection& collection);
Collection ParseCollection(std::vector<char> bytes, std::string source = "<memory>");

// Draws min(per_image, F_i) rows without replacement from every image, in
// collection order. The draw for an image depends only on (seed, image_id).
DescriptorMatrix SampleFeatures(const Collection& collection, int per_image,
                                std::uint64_t seed);

}  // namespace graphmatch

#endif  // GRAPHMATCH_DESCRIPTORS_H_
