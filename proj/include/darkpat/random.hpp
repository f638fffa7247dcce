#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace darkpat {

// SplitMix64. Portable and fully specified, so seeded shuffles reproduce
// byte-for-byte on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) from the top 53 bits.
  double next_double() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // next() % bound; the modulo bias is part of the pinned algorithm.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    return next() % bound;
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates, descending: for i = n-1 .. 1 swap(i, next() % (i+1)).
template <typename T>
void seeded_shuffle(std::span<T> values, SplitMix64& rng) {
  if (values.size() < 2) return;
  for (std::size_t i = values.size() - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i + 1));
    using std::swap;
    swap(values[i], values[j]);
  }
}

}  // namespace darkpat
