#include "rboost/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace rboost {
namespace {

std::atomic<std::size_t> g_max_threads{0};

}  // namespace

void set_max_threads(std::size_t threads) { g_max_threads = threads; }

std::size_t max_threads() {
  const std::size_t cap = g_max_threads.load();
  if (cap > 0) return cap;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t begin, std::size_t end, std::size_t num_chunks,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (end <= begin) return;
  const std::size_t total = end - begin;
  num_chunks = std::clamp<std::size_t>(num_chunks, 1, total);
  const auto chunk_begin = [&](std::size_t c) { return begin + total * c / num_chunks; };

  const std::size_t workers = std::min(max_threads(), num_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) body(chunk_begin(c), chunk_begin(c + 1), c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t c = next++; c < num_chunks; c = next++) {
          body(chunk_begin(c), chunk_begin(c + 1), c);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rboost
