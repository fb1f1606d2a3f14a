#include "aqo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace aqo {

namespace {

std::atomic<unsigned> g_threads{0};
thread_local bool t_in_parallel = false;

}  // namespace

void set_thread_count(unsigned count) { g_threads.store(count); }

unsigned thread_count() {
  const unsigned requested = g_threads.load();
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), count));
  if (workers <= 1 || t_in_parallel) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;
  auto run = [&] {
    t_in_parallel = true;
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) break;
      try {
        body(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (k < error_index) {
          error_index = k;
          error = std::current_exception();
        }
      }
    }
    t_in_parallel = false;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace aqo
