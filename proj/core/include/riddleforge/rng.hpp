#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace riddleforge {

// Seeded generator whose outputs are identical on every platform and
// standard library: the engine is mt19937_64 (fully specified) and all
// derived draws are implemented here rather than via <random>
// distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform integer in [lo, hi].
  std::uint64_t uniform_between(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_below(hi - lo + 1);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

  /// k distinct elements of `pool` in draw order (partial Fisher-Yates).
  /// Returns the whole pool, shuffled, when k >= pool.size().
  template <typename T>
  std::vector<T> sample(std::span<const T> pool, std::size_t k) {
    std::vector<T> scratch(pool.begin(), pool.end());
    const std::size_t take = k < scratch.size() ? k : scratch.size();
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_below(scratch.size() - i));
      using std::swap;
      swap(scratch[i], scratch[j]);
    }
    scratch.resize(take);
    return scratch;
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent per-item seed from a master seed and a key, so work can be
/// processed in any order (or in parallel) without changing results.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key);

}  // namespace riddleforge
