// Deterministic seeded RNG with independent streams.
//
// xoshiro256++ with splitmix64 initialization. The generator is fully
// specified here (no library distributions), so identical (seed, stream)
// pairs reproduce identical draws across platforms and across runs with
// different worker counts.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace rdmgeo {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace detail

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_(stream_id) {
    std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x9e3779b97f4a7c15ULL);
    for (auto& word : state_) word = detail::splitmix64(sm);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() {
    using detail::rotl;
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (explicit algorithm, not a library
  /// distribution, to keep draws platform-stable).
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Complex standard normal, E|z|^2 = 1.
  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
};

}  // namespace rdmgeo
