#ifndef STABLEPRED_RNG_HPP
#define STABLEPRED_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace stablepred {

// Seedable, splittable PRNG. Every randomized operation in this library takes
// one explicitly; callers own it. Avoids std:: distributions so that a seed
// produces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., bound-1}, rejection-sampled to avoid modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform k-subset of {0, ..., n-1} (Floyd's algorithm), returned sorted.
  std::vector<int> sample_indices(int n, int k) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = n - k; j < n; ++j) {
      const int t = static_cast<int>(next_below(static_cast<std::uint64_t>(j) + 1));
      if (std::find(out.begin(), out.end(), t) == out.end()) {
        out.push_back(t);
      } else {
        out.push_back(j);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Derives an independent child generator; the parent advances by one draw.
  Rng split() { return Rng(next_u64() ^ 0x9e3779b97f4a7c15ull); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stablepred

#endif
