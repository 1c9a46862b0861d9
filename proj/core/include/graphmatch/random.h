#ifndef GRAPHMATCH_RANDOM_H_
#define GRAPHMATCH_RANDOM_H_

#include <cstdint>
#include <random>

namespace graphmatch {

// splitmix64 finalizer; used to derive independent streams from one seed.
std::uint64_t MixBits(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// Maps 64 random bits to a double in [0, 1).
inline double ToUnitInterval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Seeded generator whose output is identical on every platform. The standard
// distributions are implementation-defined, so the few we need live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextBits() { return engine_(); }
  double Uniform() { return ToUnitInterval(engine_()); }
  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t UniformInt(std::uint64_t bound);
  double Normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace graphmatch

#endif  // GRAPHMATCH_RANDOM_H_
