#pragma once

#include <cstdint>

namespace corrkit {

// Deterministic 64-bit generator with the splitmix64 state transition:
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
// Instances are pinned by seed so generated ensembles are reproducible
// across platforms and implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // next() % m; the modulo bias is irrelevant here, determinism is the point.
  std::uint64_t below(std::uint64_t m) { return next() % m; }

  bool coin() { return next() & 1u; }

  // true with probability num/den
  bool bernoulli(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace corrkit
