#pragma once

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "iqgal/arith.hpp"

namespace iqgal::detail {

// Computes blocks [first, last) on `workers` threads and hands each result to
// `consume` on the calling thread in block order. `consume` returning false
// stops the run; blocks computed past that point are discarded.
template <class Result>
void ordered_blocks(i64 first, i64 last, int workers, const std::function<Result(i64)>& compute,
                    const std::function<bool(i64, Result&&)>& consume) {
  workers = std::max(1, workers);
  if (first >= last) return;
  if (workers == 1) {
    for (i64 b = first; b < last; ++b) {
      if (!consume(b, compute(b))) return;
    }
    return;
  }

  const i64 window = 4 * static_cast<i64>(workers);
  std::mutex mu;
  std::condition_variable cv;
  std::map<i64, Result> done;
  i64 next = first;
  i64 expected = first;
  bool stop = false;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      i64 b;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return stop || next >= last || next < expected + window; });
        if (stop || next >= last) return;
        b = next++;
      }
      try {
        Result r = compute(b);
        std::lock_guard lock(mu);
        done.emplace(b, std::move(r));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        stop = true;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);

  while (expected < last) {
    Result r;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return stop || done.contains(expected); });
      if (stop) break;
      auto node = done.extract(expected);
      r = std::move(node.mapped());
    }
    bool keep_going = true;
    try {
      keep_going = consume(expected, std::move(r));
    } catch (...) {
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
      keep_going = false;
    }
    {
      std::lock_guard lock(mu);
      ++expected;
      if (!keep_going) stop = true;
    }
    cv.notify_all();
    if (!keep_going) break;
  }
  {
    std::lock_guard lock(mu);
    stop = true;
  }
  cv.notify_all();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace iqgal::detail
