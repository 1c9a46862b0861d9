#ifndef GRAPHMATCH_VERIFY_H_
#define GRAPHMATCH_VERIFY_H_

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphmatch/descriptors.h"
#include "graphmatch/types.h"

namespace graphmatch {

enum class VerifierKind { kSynthetic, kDescriptorOverlap, kExternal };

std::string_view VerifierName(VerifierKind kind);
VerifierKind ParseVerifierKind(std::string_view name);

struct VerifierConfig {
  VerifierKind kind = VerifierKind::kSynthetic;
  std::uint32_t min_matches = 30;
  double ratio_threshold = 0.8;
  double flip_noise = 0.0;  // synthetic only
  std::uint64_t seed = 0;   // synthetic only
  std::string command;      // external only
  int num_workers = 1;      // external only
};

// Pairwise verification predicate. Implementations must be safe to call
// concurrently on distinct pairs and symmetric in the pair's orientation.
class Verifier {
 public:
  virtual ~Verifier() = default;
  virtual VerificationOutcome Verify(ImagePair pair) = 0;
};

// Answers from a ground-truth edge set, flipping each answer with probability
// flip_noise. The flip for a pair depends only on (seed, pair).
class SyntheticVerifier : public Verifier {
 public:
  SyntheticVerifier(const std::vector<Edge>& truth, double flip_noise, std::uint64_t seed,
                    std::uint32_t min_matches = 30);
  VerificationOutcome Verify(ImagePair pair) override;

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> truth_;
  double flip_noise_;
  std::uint64_t seed_;
  std::uint32_t min_matches_;
};

// Counts mutual nearest-neighbor descriptor matches that pass the ratio test
// in both directions; matched when the count reaches min_matches.
class DescriptorOverlapVerifier : public Verifier {
 public:
  DescriptorOverlapVerifier(const Collection& collection, double ratio_threshold,
                            std::uint32_t min_matches);
  VerificationOutcome Verify(ImagePair pair) override;

  // Number of mutual ratio-test matches between two descriptor sets.
  static std::uint32_t CountMutualMatches(const DescriptorMatrix& a, const DescriptorMatrix& b,
                                          double ratio_threshold);

 private:
  const Collection& collection_;
  double ratio_threshold_;
  std::uint32_t min_matches_;
};

// Delegates to a pool of child processes speaking the line protocol
//   request  "VERIFY <i> <j>"
//   response "RESULT <i> <j> <0|1> <inliers>"
// over their standard streams. `command` runs under /bin/sh -c.
class ExternalVerifier : public Verifier {
 public:
  ExternalVerifier(const std::string& command, int num_workers);
  ~ExternalVerifier() override;
  ExternalVerifier(const ExternalVerifier&) = delete;
  ExternalVerifier& operator=(const ExternalVerifier&) = delete;

  VerificationOutcome Verify(ImagePair pair) override;

 private:
  struct Worker;

  Worker* Acquire();
  void Release(Worker* worker);

  std::vector<std::unique_ptr<Worker>> workers_;
  std::vector<Worker*> idle_;
  std::mutex mutex_;
  std::condition_variable available_;
};

std::unique_ptr<Verifier> MakeVerifier(const VerifierConfig& config, const Collection* collection,
                                       const std::vector<Edge>* truth);

// Verifies `pairs` on up to num_threads workers; outcomes are returned in the
// order of `pairs`.
std::vector<VerificationOutcome> VerifyBatch(Verifier& verifier, std::span<const ImagePair> pairs,
                                             int num_threads);

// (M_AB / min(F_A, F_B)) * (M_BC / min(F_B, F_C)).
double InlierRatioScore(std::uint32_t inliers_ab, std::uint32_t features_a,
                        std::uint32_t features_b, std::uint32_t inliers_bc,
                        std::uint32_t features_c);

}  // namespace graphmatch

#endif  // GRAPHMATCH_VERIFY_H_
