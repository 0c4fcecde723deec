#pragma once

#include <cstdint>
#include <random>

namespace fracton {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed for an independent stream derived from (master, stream index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t x = master;
  std::uint64_t s = splitmix64(x);
  x ^= (stream + 0x9E3779B97F4A7C15ull) * 0xD1342543DE82EF95ull;
  s ^= splitmix64(x);
  return s;
}

// mt19937_64 with hand-rolled bounded draws. The standard distributions are
// not bit-stable across library implementations; these are.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform integer in [0, n); rejection sampling, no modulo bias
  std::uint32_t below(std::uint32_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return static_cast<std::uint32_t>(v % n);
  }

  bool coin() { return (engine_() >> 63) != 0; }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

inline Rng stream_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

}  // namespace fracton
