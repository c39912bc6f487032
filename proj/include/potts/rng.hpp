#ifndef POTTS_RNG_HPP
#define POTTS_RNG_HPP

#include <cstdint>

namespace potts {

// SplitMix64: counter-based 64-bit generator. The state is a plain counter
// advanced by the golden-ratio gamma; every output is a hash of the counter,
// so a stream is reproducible from (seed, stream, n_draws) alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Independently seeded stream for chain `stream_id`. Seeds are decorrelated
  // by hashing before use, so nearby ids do not give overlapping counters.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_id) {
    return SplitMix64(mix(mix(seed) ^ (0xD6E8FEB86659FD93ull * (stream_id + 1))));
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // uniform in [0,1), 53-bit mantissa
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // uniform integer in [0, bound), bound >= 1
  std::uint32_t below(std::uint32_t bound) {
    // Lemire's multiply-shift rejection
    std::uint64_t x = next() & 0xFFFFFFFFull;
    std::uint64_t m = x * bound;
    std::uint32_t l = static_cast<std::uint32_t>(m);
    if (l < bound) {
      std::uint32_t t = (0u - bound) % bound;
      while (l < t) {
        x = next() & 0xFFFFFFFFull;
        m = x * bound;
        l = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  std::uint64_t state() const { return state_; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace potts

#endif
