#include "graphmatch/parallel.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace graphmatch {

void ParallelFor(std::size_t num_tasks, int num_threads,
                 const std::function<void(std::size_t)>& task) {
  if (num_tasks == 0) return;
  const std::size_t workers = std::min<std::size_t>(
      num_tasks, static_cast<std::size_t>(std::max(1, num_threads)));
  if (workers == 1) {
    for (std::size_t i = 0; i < num_tasks; ++i) task(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < num_tasks;
         i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (std::size_t t = 0; t + 1 < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& thread : threads) thread.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace graphmatch
