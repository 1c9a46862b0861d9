#include "graphmatch/verify.h"

#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <limits>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "graphmatch/error.h"
#include "graphmatch/parallel.h"
#include "graphmatch/random.h"

extern char** environ;

namespace graphmatch {
namespace {

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

std::string_view VerifierName(VerifierKind kind) {
  switch (kind) {
    case VerifierKind::kSynthetic: return "synthetic";
    case VerifierKind::kDescriptorOverlap: return "descriptor_overlap";
    case VerifierKind::kExternal: return "external";
  }
  return "unknown";
}

VerifierKind ParseVerifierKind(std::string_view name) {
  if (name == "synthetic") return VerifierKind::kSynthetic;
  if (name == "descriptor_overlap") return VerifierKind::kDescriptorOverlap;
  if (name == "external") return VerifierKind::kExternal;
  throw PreconditionError(fmt::format("unknown verifier '{}'", name));
}

SyntheticVerifier::SyntheticVerifier(const std::vector<Edge>& truth, double flip_noise,
                                     std::uint64_t seed, std::uint32_t min_matches)
    : flip_noise_(flip_noise), seed_(seed), min_matches_(min_matches) {
  if (!(flip_noise >= 0.0 && flip_noise < 1.0)) {
    throw PreconditionError("flip_noise must be in [0, 1)");
  }
  for (const Edge& e : truth) {
    truth_[ImagePair::Make(e.pair.first, e.pair.second).Key()] = e.inliers;
  }
}

VerificationOutcome SyntheticVerifier::Verify(ImagePair pair) {
  const Stopwatch timer;
  const std::uint64_t key = ImagePair::Make(pair.first, pair.second).Key();
  const auto it = truth_.find(key);
  const bool truth_edge = it != truth_.end();
  const bool flip = flip_noise_ > 0.0 && ToUnitInterval(DeriveSeed(seed_, key)) < flip_noise_;
  VerificationOutcome outcome;
  outcome.matched = truth_edge != flip;
  if (outcome.matched) outcome.inliers = truth_edge ? it->second : min_matches_;
  outcome.cost = timer.Seconds();
  return outcome;
}

DescriptorOverlapVerifier::DescriptorOverlapVerifier(const Collection& collection,
                                                     double ratio_threshold,
                                                     std::uint32_t min_matches)
    : collection_(collection), ratio_threshold_(ratio_threshold), min_matches_(min_matches) {
  if (!(ratio_threshold > 0.0 && ratio_threshold < 1.0)) {
    throw PreconditionError("ratio_threshold must be in (0, 1)");
  }
  if (min_matches == 0) throw PreconditionError("min_matches must be positive");
}

std::uint32_t DescriptorOverlapVerifier::CountMutualMatches(const DescriptorMatrix& a,
                                                            const DescriptorMatrix& b,
                                                            double ratio_threshold) {
  const Eigen::Index na = a.rows();
  const Eigen::Index nb = b.rows();
  if (na == 0 || nb == 0) return 0;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  struct Nearest {
    Eigen::Index index = -1;
    double best = kInf;
    double second = kInf;

    void Offer(Eigen::Index i, double d) {
      if (d < best) {
        second = best;
        best = d;
        index = i;
      } else if (d < second) {
        second = d;
      }
    }
    bool PassesRatio(double ratio_sq) const {
      return second == kInf || best < ratio_sq * second;
    }
  };

  std::vector<Nearest> from_a(static_cast<std::size_t>(na));
  std::vector<Nearest> from_b(static_cast<std::size_t>(nb));
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j) {
      double dist = 0.0;
      for (Eigen::Index d = 0; d < a.cols(); ++d) {
        const double diff = static_cast<double>(a(i, d)) - static_cast<double>(b(j, d));
        dist += diff * diff;
      }
      from_a[static_cast<std::size_t>(i)].Offer(j, dist);
      from_b[static_cast<std::size_t>(j)].Offer(i, dist);
    }
  }

  const double ratio_sq = ratio_threshold * ratio_threshold;
  std::uint32_t matches = 0;
  for (Eigen::Index i = 0; i < na; ++i) {
    const Nearest& forward = from_a[static_cast<std::size_t>(i)];
    const Nearest& backward = from_b[static_cast<std::size_t>(forward.index)];
    if (backward.index == i && forward.PassesRatio(ratio_sq) && backward.PassesRatio(ratio_sq)) {
      ++matches;
    }
  }
  return matches;
}

VerificationOutcome DescriptorOverlapVerifier::Verify(ImagePair pair) {
  const Stopwatch timer;
  pair = ImagePair::Make(pair.first, pair.second);
  if (pair.second >= collection_.size()) {
    throw DataError(fmt::format("no descriptors for image {}", pair.second));
  }
  const std::uint32_t count =
      CountMutualMatches(collection_.ById(pair.first).rows, collection_.ById(pair.second).rows,
                         ratio_threshold_);
  VerificationOutcome outcome;
  outcome.matched = count >= min_matches_;
  outcome.inliers = outcome.matched ? count : 0;
  outcome.cost = timer.Seconds();
  return outcome;
}

struct ExternalVerifier::Worker {
  pid_t pid = -1;
  int fd = -1;
  std::string buffer;

  void Send(const std::string& line) {
    std::size_t sent = 0;
    while (sent < line.size()) {
      const ssize_t n = ::send(fd, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        throw DataError(fmt::format("external verifier: write failed: {}", std::strerror(errno)));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string ReceiveLine() {
    for (;;) {
      const auto newline = buffer.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer.substr(0, newline);
        buffer.erase(0, newline + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      char chunk[4096];
      const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n < 0) {
        throw DataError(fmt::format("external verifier: read failed: {}", std::strerror(errno)));
      }
      if (n == 0) throw DataError("external verifier: process closed its output");
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

ExternalVerifier::ExternalVerifier(const std::string& command, int num_workers) {
  if (command.empty()) throw PreconditionError("external verifier needs a command");
  if (num_workers < 1) throw PreconditionError("external verifier needs at least one worker");
  for (int w = 0; w < num_workers; ++w) {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      throw DataError(fmt::format("socketpair failed: {}", std::strerror(errno)));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
    pid_t pid = -1;
    const int rc = posix_spawn(&pid, "/bin/sh", &actions, nullptr,
                               const_cast<char* const*>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(fds[1]);
    if (rc != 0) {
      ::close(fds[0]);
      throw DataError(fmt::format("cannot start external verifier: {}", std::strerror(rc)));
    }
    auto worker = std::make_unique<Worker>();
    worker->pid = pid;
    worker->fd = fds[0];
    idle_.push_back(worker.get());
    workers_.push_back(std::move(worker));
  }
}

ExternalVerifier::~ExternalVerifier() {
  for (auto& worker : workers_) ::shutdown(worker->fd, SHUT_WR);
  for (auto& worker : workers_) {
    int status = 0;
    bool exited = false;
    for (int attempt = 0; attempt < 100 && !exited; ++attempt) {
      exited = ::waitpid(worker->pid, &status, WNOHANG) == worker->pid;
      if (!exited) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (!exited) {
      ::kill(worker->pid, SIGKILL);
      ::waitpid(worker->pid, &status, 0);
    }
    ::close(worker->fd);
  }
}

ExternalVerifier::Worker* ExternalVerifier::Acquire() {
  std::unique_lock<std::mutex> lock(mutex_);
  available_.wait(lock, [this] { return !idle_.empty(); });
  Worker* worker = idle_.back();
  idle_.pop_back();
  return worker;
}

void ExternalVerifier::Release(Worker* worker) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    idle_.push_back(worker);
  }
  available_.notify_one();
}

VerificationOutcome ExternalVerifier::Verify(ImagePair pair) {
  const Stopwatch timer;
  pair = ImagePair::Make(pair.first, pair.second);
  Worker* worker = Acquire();
  std::string line;
  try {
    worker->Send(fmt::format("VERIFY {} {}\n", pair.first, pair.second));
    line = worker->ReceiveLine();
  } catch (...) {
    Release(worker);
    throw;
  }
  Release(worker);

  std::istringstream fields(line);
  std::string tag, extra;
  std::uint64_t i, j, matched, inliers;
  if (!(fields >> tag >> i >> j >> matched >> inliers) || (fields >> extra) || tag != "RESULT" ||
      i != pair.first || j != pair.second || matched > 1 ||
      inliers > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError(fmt::format("external verifier protocol violation for ({},{}): '{}'",
                                pair.first, pair.second, line));
  }
  VerificationOutcome outcome;
  outcome.matched = matched == 1;
  outcome.inliers = static_cast<std::uint32_t>(inliers);
  outcome.cost = timer.Seconds();
  return outcome;
}

std::unique_ptr<Verifier> MakeVerifier(const VerifierConfig& config, const Collection* collection,
                                       const std::vector<Edge>* truth) {
  switch (config.kind) {
    case VerifierKind::kSynthetic:
      if (!truth) throw PreconditionError("synthetic verifier needs a ground-truth edge set");
      return std::make_unique<SyntheticVerifier>(*truth, config.flip_noise, config.seed,
                                                 config.min_matches);
    case VerifierKind::kDescriptorOverlap:
      if (!collection) throw PreconditionError("descriptor_overlap verifier needs descriptors");
      return std::make_unique<DescriptorOverlapVerifier>(*collection, config.ratio_threshold,
                                                         config.min_matches);
    case VerifierKind::kExternal:
      return std::make_unique<ExternalVerifier>(config.command, config.num_workers);
  }
  throw PreconditionError("unknown verifier kind");
}

std::vector<VerificationOutcome> VerifyBatch(Verifier& verifier, std::span<const ImagePair> pairs,
                                             int num_threads) {
  std::vector<VerificationOutcome> outcomes(pairs.size());
  ParallelFor(pairs.size(), num_threads,
              [&](std::size_t i) { outcomes[i] = verifier.Verify(pairs[i]); });
  return outcomes;
}

double InlierRatioScore(std::uint32_t inliers_ab, std::uint32_t features_a,
                        std::uint32_t features_b, std::uint32_t inliers_bc,
                        std::uint32_t features_c) {
  if (features_a == 0 || features_b == 0 || features_c == 0) {
    throw PreconditionError("inlier ratio needs non-zero feature counts");
  }
  const std::uint32_t min_ab = std::min(features_a, features_b);
  const std::uint32_t min_bc = std::min(features_b, features_c);
  if (inliers_ab > min_ab || inliers_bc > min_bc) {
    throw PreconditionError("inlier count exceeds the smaller feature count");
  }
  return (static_cast<double>(inliers_ab) / min_ab) * (static_cast<double>(inliers_bc) / min_bc);
}

}  // namespace graphmatch
