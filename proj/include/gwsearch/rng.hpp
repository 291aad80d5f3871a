#pragma once

#include <cstdint>
#include <random>

namespace gwsearch {

/// splitmix64 finalizer. Used to expand one user seed into independent
/// substream seeds: substream k of seed s is splitmix64(s + k * golden).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t stream) noexcept {
  return splitmix64(seed + stream * 0x9e3779b97f4a7c15ULL);
}

/// 64-bit Mersenne Twister with a platform-independent uniform on [0,1).
/// std::uniform_real_distribution is not specified bit-exactly across
/// standard libraries, so it is avoided here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gwsearch
