#pragma once

#include <cstdint>
#include <complex>
#include <vector>

namespace nlslab {

// SplitMix64 (Steele/Lea/Flood splittable generator, Vigna's constants).
// state advances by the golden gamma; output is the 64-bit finalizer mix.
// Chosen for reproducibility: the whole algorithm fits in four lines and
// the streams derived by substream() never share state trajectories.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

  // uniform on [0, 1), 53-bit resolution
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]; safe as a log() argument
  double next_double_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via Box-Muller, one spare cached
  double next_gaussian();

  std::complex<double> next_phase();  // e^{i theta}, theta uniform on [0, 2pi)

  // Independent child stream k: mixes (seed, k) through the finalizer so
  // sibling streams start at unrelated points of the state space.
  RngStream substream(std::uint64_t k) const {
    return RngStream(splitmix64_mix(state_ ^ splitmix64_mix(k + 0x9E3779B97F4A7C15ULL)));
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nlslab
