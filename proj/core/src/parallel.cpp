#include "cptlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace cptlab {
namespace {

std::atomic<std::size_t> g_override{0};

std::size_t from_env() {
  const char* text = std::getenv("CPT_LAB_THREADS");
  if (text == nullptr || *text == '\0') return 0;
  try {
    const long value = std::stol(text);
    return value > 0 ? static_cast<std::size_t>(value) : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

std::size_t worker_count() {
  if (const auto forced = g_override.load()) return forced;
  if (const auto env = from_env()) return env;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_count(std::size_t workers) { g_override.store(workers); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers = std::min(worker_count(), count);
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto run = [&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace cptlab
