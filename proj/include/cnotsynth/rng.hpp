#pragma once

#include <cstdint>

namespace cnot {

// Deterministic PRNG (splitmix64). std::uniform_int_distribution is
// implementation-defined, so all randomness in the library goes through
// this to keep seeded runs reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent stream for task `id` under a common seed.
  static Rng for_task(std::uint64_t seed, std::uint64_t id) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (id + 1)));
    r.next();
    return r;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound), bound >= 1. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  bool coin() { return next() & 1; }

 private:
  std::uint64_t state_;
};

}  // namespace cnot
