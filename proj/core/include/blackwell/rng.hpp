#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace blackwell {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream splitting: run i under root seed r draws element i of the SplitMix64
// sequence started at r. Runs are independent and reproducible by (r, i).
inline std::uint64_t substream_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64(root + index * 0x9E3779B97F4A7C15ull);
}

// Seedable 64-bit generator (mt19937_64, bit-exact across platforms).
// Uniforms come straight from the top 53 bits, so no library distribution
// enters the reproducibility contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // One uniform draw per call regardless of the outcome.
  int sample(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    int last = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      last = i;
      cum += probs[i];
      if (u < cum) return i;
    }
    return last;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace blackwell
