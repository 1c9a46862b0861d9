#ifndef GRAPHMATCH_TYPES_H_
#define GRAPHMATCH_TYPES_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <utility>

namespace graphmatch {

using ImageId = std::uint32_t;

// Unordered image pair stored canonically with first < second.
struct ImagePair {
  ImageId first = 0;
  ImageId second = 0;

  static ImagePair Make(ImageId a, ImageId b) {
    return a < b ? ImagePair{a, b} : ImagePair{b, a};
  }

  std::uint64_t Key() const {
    return (static_cast<std::uint64_t>(first) << 32) | second;
  }

  static ImagePair FromKey(std::uint64_t key) {
    return ImagePair{static_cast<ImageId>(key >> 32),
                     static_cast<ImageId>(key & 0xffffffffu)};
  }

  friend auto operator<=>(const ImagePair&, const ImagePair&) = default;
};

struct ImagePairHash {
  std::size_t operator()(const ImagePair& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.Key());
  }
};

// Result of one pairwise verification.
struct VerificationOutcome {
  bool matched = false;
  std::uint32_t inliers = 0;
  // Elapsed wall time of the verification call, in seconds.
  double cost = 0.0;
};

// A verified edge with its inlier count.
struct Edge {
  ImagePair pair;
  std::uint32_t inliers = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

}  // namespace graphmatch

#endif  // GRAPHMATCH_TYPES_H_
