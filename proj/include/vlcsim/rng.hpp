#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace vlc {

// seed-stream derivation. One master seed fans out into independent streams,
// one per (purpose, sweep point). The scheme is fixed: two SplitMix64 steps,
// first over master^salt, then over state^point_index. Other implementations
// can reproduce every draw given this file and the engine choice below.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum class Stream : std::uint64_t {
  probe_symbols = 0x70726f6265ULL,
  training_symbols = 0x747261696eULL,
  training_noise = 0x746e6f6973ULL,
  payload_symbols = 0x7061796c64ULL,
  payload_noise = 0x706e6f6973ULL,
  elm_init = 0x656c6d69ULL,
  celm_init = 0x63656c6d69ULL,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream purpose, std::uint64_t point_index) {
  std::uint64_t s = master ^ static_cast<std::uint64_t>(purpose);
  std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ point_index;
  return splitmix64(t);
}

// mt19937_64 with explicit real-number recipes so draws are identical for any
// standard-conforming libstdc++/libc++ (distributions are not portable).
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {  // [0,1), 53-bit
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  double gauss() {  // Box-Muller, pair cached
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0,1]
    double u2 = uniform01();
    double m = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = m * std::sin(a);
    have_spare_ = true;
    return m * std::cos(a);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vlc
