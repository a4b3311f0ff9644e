#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace eegtl {

/// splitmix64 step. Used both as a stream seeder and to derive child seeds;
/// it is a bijection on 64-bit ints with good avalanche behaviour.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4bd495e39d1faULL;
  return z ^ (z >> 31);
}

/// Derive a child seed from a parent seed and a sequence of integer keys.
/// Feeding each key through splitmix64 keeps distinct key tuples decorrelated,
/// so experiment cells can get independent yet reproducible streams.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = base;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t k : keys) {
    state ^= k;
    out = splitmix64(state);
  }
  return out;
}

/// FNV-1a hash of a string, for turning config/subject names into seed keys.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic random stream. The engine is std::mt19937_64 whose output
/// sequence is fixed by the C++ standard; the uniform and normal draws below
/// are implemented by hand because the std distributions are free to differ
/// across standard libraries, which would break pinned regression values.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    // Run the seed through splitmix64 so nearby seeds give unrelated streams.
    std::uint64_t s = seed;
    engine_.seed(splitmix64(s));
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Draws are generated in pairs and the
  /// spare is cached, so the stream advances by two engine calls per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard against log(0): the smallest uniform() output is 0 exactly.
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double stddev) {
    return mean + stddev * normal();
  }

  /// Uniform integer in [0, n). Rejection-free modulo is acceptable here:
  /// n is always tiny relative to 2^64 so the bias is far below measurement
  /// noise, and determinism matters more than exactness of the distribution.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % n);
  }

  /// Fisher-Yates shuffle, in place.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Sample k distinct indices from [0, n) in random order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(idx);
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace eegtl
