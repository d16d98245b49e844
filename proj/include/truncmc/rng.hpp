#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

namespace truncmc {

// SplitMix64 step, used for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for stream s, derived by hashing the base seed with the stream index
// so adjacent streams get unrelated generator states.
inline std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t stream) {
  std::uint64_t st = base_seed;
  (void)splitmix64(st);
  st ^= 0x9e3779b97f4a7c15ULL * (stream + 1);
  return splitmix64(st);
}

// mt19937_64 with hand-rolled draw helpers. The standard distributions are
// implementation-defined, so trajectories would not be reproducible across
// standard libraries; these helpers pin the exact mapping from raw draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // uniform in [0, 1)
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n); unbiased bitmask rejection
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const int bits = 64 - std::countl_zero(n - 1);
    const std::uint64_t mask =
        (bits >= 64) ? ~0ULL : ((std::uint64_t{1} << bits) - 1);
    std::uint64_t v;
    do {
      v = gen_() & mask;
    } while (v >= n);
    return v;
  }

  // +1 or -1 with probability 1/2 each
  int sign() { return (gen_() & 1) ? 1 : -1; }

  // standard normal via Box-Muller on pinned uniforms (test helpers)
  double normal() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace truncmc
