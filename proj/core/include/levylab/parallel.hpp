#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace levylab {

unsigned resolve_threads(unsigned requested);

/// Evaluates body(chunk) for chunk = 0 .. chunks-1 on up to `threads` workers
/// and returns the results in chunk order. The partition is fixed by the
/// caller, so results do not depend on the worker count.
template <class Result, class Body>
std::vector<Result> run_chunks(std::size_t chunks, unsigned threads, Body body) {
  std::vector<Result> results(chunks);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) results[c] = body(c);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = next++; c < chunks; c = next++) results[c] = body(c);
      } catch (...) {
        errors[w] = std::current_exception();
        next = chunks;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace levylab
