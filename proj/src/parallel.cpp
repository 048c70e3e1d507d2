#include "ltpmor/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ltpmor {

namespace {
std::atomic<int> g_jobs_override{0};

int env_jobs() {
  if (const char* env = std::getenv("LTPMOR_JOBS")) {
    int j = std::atoi(env);
    if (j > 0) return j;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}
}  // namespace

int default_jobs() {
  int j = g_jobs_override.load();
  return j > 0 ? j : env_jobs();
}

void set_default_jobs(int jobs) { g_jobs_override.store(jobs > 0 ? jobs : 0); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int jobs) {
  if (count == 0) return;
  int workers = jobs > 0 ? jobs : default_jobs();
  if (workers > static_cast<int>(count)) workers = static_cast<int>(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::mutex err_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ltpmor
