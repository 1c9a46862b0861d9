#ifndef GRAPHMATCH_PARALLEL_H_
#define GRAPHMATCH_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace graphmatch {

// Runs task(i) for every i in [0, num_tasks) on up to num_threads workers.
// Tasks must only write to state owned by their index; callers merge results
// in index order so output never depends on scheduling. The exception thrown
// by the lowest failing task index is rethrown after all workers join.
void ParallelFor(std::size_t num_tasks, int num_threads,
                 const std::function<void(std::size_t)>& task);

// Number of fixed-size chunks covering [0, count).
inline std::size_t NumChunks(std::size_t count, std::size_t chunk_size) {
  return (count + chunk_size - 1) / chunk_size;
}

}  // namespace graphmatch

#endif  // GRAPHMATCH_PARALLEL_H_
