#include "bpdg/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace bpdg {

WorkerPool::WorkerPool(unsigned threads)
    : threads_(threads ? threads : std::max(1u, std::thread::hardware_concurrency())) {}

void WorkerPool::parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) const {
  const std::size_t workers = std::min<std::size_t>(threads_, n);
  if (workers <= 1) {
    if (n) body(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = n * w / workers, e = n * (w + 1) / workers;
      pool.emplace_back([&, w, b, e] {
        try {
          body(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void parallel_for(const WorkerPool* pool, std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (pool)
    pool->parallel_for(n, body);
  else if (n)
    body(0, n);
}

}  // namespace bpdg
