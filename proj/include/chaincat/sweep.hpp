#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace chaincat {

// Worker count: hardware concurrency, capped by CHAINCAT_THREADS when set.
inline unsigned sweep_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("CHAINCAT_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1)
        n = std::min(n, static_cast<unsigned>(cap));
    } catch (const std::exception &) {
      // unparsable cap is ignored
    }
  }
  return n;
}

// Runs f on every input and returns results in input order, whatever order
// the workers finish in. The first exception thrown by f is rethrown.
template <class In, class F>
auto parallel_map(const std::vector<In> &inputs, F f, unsigned threads = sweep_threads())
    -> std::vector<decltype(f(inputs.front()))> {
  using Out = decltype(f(inputs.front()));
  std::vector<Out> out(inputs.size());
  std::vector<std::exception_ptr> errors(inputs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      try {
        out[i] = f(inputs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(inputs.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k)
      pool.emplace_back(work);
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

} // namespace chaincat
