#pragma once

#include <cstddef>
#include <functional>

namespace bpdg {

// Static-chunked parallel loop over [0, n). Each index is handled by exactly one
// worker, so results never depend on the thread count.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned threads = 0);
  unsigned size() const { return threads_; }
  void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) const;

 private:
  unsigned threads_;
};

// Runs body(0, n) inline when pool is null.
void parallel_for(const WorkerPool* pool, std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace bpdg
