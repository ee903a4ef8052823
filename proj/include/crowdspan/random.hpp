#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace crowdspan {

// Seeded generator with platform-independent derived draws. The standard
// distributions are implementation-defined, so uniform and normal draws are
// built here on top of mt19937_64, whose output sequence is fixed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [lo, hi] inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  // Uniform real in [0, 1) with 53 random bits.
  double uniform();

  // Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace crowdspan
