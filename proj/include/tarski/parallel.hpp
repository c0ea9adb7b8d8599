#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "tarski/word.hpp"

namespace tarski {

/// Runs fn(i) for i in [0, count) on up to `threads` workers; results come back in index order.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> results(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            results[i] = fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
  return results;
}

/**
 * A slice of the ball of radius n. Shard 0 holds the words of length <= 1;
 * every reduced two-letter prefix owns the words of length 2..n starting with it.
 */
struct BallShard {
  std::vector<Letter> prefix;
  bool short_words = false;
};

inline std::vector<BallShard> ball_shards(std::size_t n) {
  std::vector<BallShard> shards;
  shards.push_back({{}, true});
  if (n < 2) return shards;
  for (Letter x : kLetters)
    for (Letter y : kLetters)
      if (y != inverse(x)) shards.push_back({{x, y}, false});
  return shards;
}

/// Visits the shard's words in shortlex order.
template <class Visitor>
void for_each_word_in_shard(const BallShard& shard, std::size_t n, Visitor&& visit) {
  if (shard.short_words) {
    for (std::size_t len = 0; len <= std::min<std::size_t>(n, 1); ++len)
      for_each_word_of_length(len, visit);
    return;
  }
  for (std::size_t len = 2; len <= n; ++len)
    for (WordCursor c(len, shard.prefix); c.valid(); c.advance()) visit(c.word());
}

}  // namespace tarski
