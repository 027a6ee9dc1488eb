#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace netab {

/// Counter-based splitmix64 generator.
///
/// Output depends only on the seed and the number of draws, so experiments
/// replay bit-for-bit on any platform (unlike std:: distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) noexcept : seed_(seed), counter_(0) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t draws() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) noexcept;

  /// Independent generator for a named sub-stream.
  Rng fork(std::uint64_t stream) const noexcept;

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace netab
