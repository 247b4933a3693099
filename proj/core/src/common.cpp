#include "wsp/common.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wsp {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WSP_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for_blocks(std::size_t n_blocks, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (n_blocks == 0) return;
  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n_blocks);
  if (n_threads <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }

  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t b = t; b < n_blocks; b += n_threads) fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wsp
