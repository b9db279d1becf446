#ifndef WARDFLOW_RNG_HPP
#define WARDFLOW_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace wardflow {

/// xoshiro256** seeded through splitmix64. The algorithm is fixed by this
/// header, not by the standard library, so identical seeds produce identical
/// streams on every platform. A named stream folds its label into the seed;
/// tables drawing from different streams cannot perturb each other.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { init(seed); }

  Rng(std::uint64_t seed, std::string_view stream) {
    init(seed ^ fnv1a64(stream));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1), 53 bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
    return lo + static_cast<std::int64_t>(bounded(span));
  }

  /// Box-Muller; the paired draw is cached so consumption is two uniforms
  /// per two normals.
  double next_normal(double mean = 0.0, double sd = 1.0) {
    if (have_cached_) {
      have_cached_ = false;
      return mean + sd * cached_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return mean + sd * r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j =
          static_cast<std::size_t>(bounded(static_cast<std::uint64_t>(i)));
      std::swap(items[i - 1], items[j]);
    }
  }

  static std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : text) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  void init(std::uint64_t seed) {
    // splitmix64 expansion of the seed into the four-word state.
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      word = z ^ (z >> 31);
    }
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  /// Unbiased bounded draw (rejection on the wraparound region).
  std::uint64_t bounded(std::uint64_t span) {
    const std::uint64_t limit = (0ull - span) % span;
    for (;;) {
      const std::uint64_t draw = next_u64();
      if (draw >= limit) return draw % span;
    }
  }

  std::uint64_t state_[4] = {};
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace wardflow

#endif  // WARDFLOW_RNG_HPP
