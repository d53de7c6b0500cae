#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qgmap/seq.hpp"

// Order-independent parallel primitives. Every pass launches its workers,
// joins them, and only then returns, so a later pass always observes all
// writes of an earlier one. Output slot assignment within an interval of
// scatter_with_counters is the only scheduling-dependent result; consumers
// must be order-insensitive or sort afterwards.

namespace qgmap::par {

inline unsigned effective_threads(unsigned requested) {
  if (requested == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  return requested;
}

// Runs body(begin, end) on contiguous chunks of [0, count).
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& body) {
  threads = effective_threads(threads);
  if (count == 0) return;
  if (threads <= 1 || count < 2048) {
    body(std::size_t(0), count);
    return;
  }
  const std::size_t chunk = (count + threads - 1) / threads;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(count, std::size_t(t) * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& w : workers) w.join();
}

namespace detail {

template <class T>
inline T checked_add(T a, T b) {
  T s = static_cast<T>(a + b);
  if (s < a) throw input_error("prefix sum overflows the index word");
  return s;
}

}  // namespace detail

// In-place exclusive prefix sum; returns the total. Two blocked passes so
// the result is identical for any thread count.
template <class T>
T exclusive_scan_in_place(std::vector<T>& values, unsigned threads = 1) {
  const std::size_t n = values.size();
  if (n == 0) return T(0);
  threads = effective_threads(threads);
  const std::size_t min_chunk = 4096;
  std::size_t chunks = std::min<std::size_t>(threads, (n + min_chunk - 1) / min_chunk);
  if (chunks <= 1) {
    T run = 0;
    for (std::size_t i = 0; i < n; ++i) {
      T v = values[i];
      values[i] = run;
      run = detail::checked_add(run, v);
    }
    return run;
  }
  const std::size_t chunk = (n + chunks - 1) / chunks;
  std::vector<T> chunk_totals(chunks, T(0));
  parallel_for(chunks, threads, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
      T run = 0;
      for (std::size_t i = lo; i < hi; ++i) run = detail::checked_add(run, values[i]);
      chunk_totals[c] = run;
    }
  });
  T total = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    T v = chunk_totals[c];
    chunk_totals[c] = total;
    total = detail::checked_add(total, v);
  }
  parallel_for(chunks, threads, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t c = cb; c < ce; ++c) {
      const std::size_t lo = c * chunk, hi = std::min(n, lo + chunk);
      T run = chunk_totals[c];
      for (std::size_t i = lo; i < hi; ++i) {
        T v = values[i];
        values[i] = run;
        run = static_cast<T>(run + v);
      }
    }
  });
  return total;
}

template <class T>
struct ScanResult {
  std::vector<T> sums;  // same length as the input
  T total;
};

template <class T>
ScanResult<T> exclusive_scan(const std::vector<T>& values, unsigned threads = 1) {
  ScanResult<T> out{values, T(0)};
  out.total = exclusive_scan_in_place(out.sums, threads);
  return out;
}

// Keeps items satisfying the predicate, preserving relative order.
template <class T, class Pred>
std::vector<T> compact(const std::vector<T>& items, Pred keep, unsigned threads = 1) {
  const std::size_t n = items.size();
  std::vector<std::uint32_t> flags(n);
  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) flags[i] = keep(items[i]) ? 1u : 0u;
  });
  const std::uint32_t total = exclusive_scan_in_place(flags, threads);
  std::vector<T> out(total);
  parallel_for(n, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::uint32_t slot = flags[i];
      const bool kept = (i + 1 < n ? flags[i + 1] : total) != slot;
      if (kept) out[slot] = items[i];
    }
  });
  return out;
}

// Shared counters for contended scatter slots. Totals after a pass equal
// the number of bump() calls per slot regardless of scheduling.
class CounterArray {
public:
  CounterArray() = default;
  explicit CounterArray(std::size_t n) : size_(n), slots_(new std::atomic<std::uint32_t>[n]) {
    for (std::size_t i = 0; i < n; ++i) slots_[i].store(0, std::memory_order_relaxed);
  }

  std::size_t size() const { return size_; }

  std::uint32_t bump(std::size_t i) {
    return slots_[i].fetch_add(1, std::memory_order_relaxed);
  }

  std::uint32_t value(std::size_t i) const {
    return slots_[i].load(std::memory_order_relaxed);
  }

private:
  std::size_t size_ = 0;
  std::unique_ptr<std::atomic<std::uint32_t>[]> slots_;
};

// Runs emit(task, put) for every task; put(interval, value) claims the next
// free slot of that interval in out. interval_start must carry a final
// total, and a prior counting pass must have sized the intervals: claiming
// past an interval end means the counting pass was wrong.
template <class T, class Emit>
void scatter_with_counters(std::size_t task_count, std::span<const std::uint32_t> interval_start,
                           CounterArray& counters, std::span<T> out, Emit&& emit,
                           unsigned threads = 1) {
  if (interval_start.size() != counters.size() + 1)
    throw std::logic_error("scatter_with_counters: interval table does not match counters");
  parallel_for(task_count, threads, [&](std::size_t b, std::size_t e) {
    auto put = [&](std::size_t interval, T value) {
      const std::uint32_t k = interval_start[interval] + counters.bump(interval);
      if (k >= interval_start[interval + 1])
        throw std::logic_error("scatter_with_counters: interval capacity exceeded");
      out[k] = value;
    };
    for (std::size_t i = b; i < e; ++i) emit(i, put);
  });
}

}  // namespace qgmap::par
