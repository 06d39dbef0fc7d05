#pragma once

#include <omp.h>

namespace radomult {

inline int max_threads() { return omp_get_max_threads(); }

/// Sets the OpenMP thread count for the lifetime of the object; 0 leaves it alone.
class ThreadScope {
 public:
  explicit ThreadScope(int threads) : previous_(omp_get_max_threads()), active_(threads > 0) {
    if (active_) omp_set_num_threads(threads);
  }
  ~ThreadScope() {
    if (active_) omp_set_num_threads(previous_);
  }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

 private:
  int previous_;
  bool active_;
};

}  // namespace radomult
