#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace resim {

// splitmix64; used to derive independent stream seeds from (seed, indices)
// so parallel rollouts stay reproducible without shared RNG state.
inline std::uint64_t hash_u64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t seed_from(std::uint64_t seed, std::uint64_t a) {
  return hash_u64(seed ^ hash_u64(a));
}

inline std::uint64_t seed_from(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return seed_from(seed_from(seed, a), b);
}

inline std::uint64_t seed_from(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                               std::uint64_t c) {
  return seed_from(seed_from(seed, a, b), c);
}

// mt19937_64 with a Box-Muller normal. std::normal_distribution is
// implementation-defined, so we roll the transform ourselves to keep
// sample streams identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    // 53-bit mantissa uniform in [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace resim
