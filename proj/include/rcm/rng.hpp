#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace rcm {

// xoshiro256** (Blackman & Vigna), seeded through splitmix64. 256 bits of
// state; jump() advances by 2^128 steps so independent streams can be split
// off a single seed.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view name = "xoshiro256**";

  explicit Xoshiro256(std::uint64_t seed = 0) { reseed(seed); }

  /// Stream `stream` of `seed`: the seeded state advanced by `stream` jumps.
  static Xoshiro256 stream(std::uint64_t seed, std::uint64_t stream) {
    Xoshiro256 g(seed);
    for (std::uint64_t i = 0; i < stream; ++i) g.jump();
    return g;
  }

  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits; identical on every platform.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) noexcept { return uniform() < prob; }

  void jump() noexcept {
    static constexpr std::array<std::uint64_t, 4> kJump = {0x180ec6d33cfd0aba, 0xd5a61266f0c9392c,
                                                           0xa9582618e03fc9aa, 0x39abdc4529b1661c};
    std::array<std::uint64_t, 4> t{};
    for (std::uint64_t word : kJump) {
      for (int b = 0; b < 64; ++b) {
        if (word & (std::uint64_t{1} << b))
          for (int i = 0; i < 4; ++i) t[i] ^= s_[i];
        (*this)();
      }
    }
    s_ = t;
  }

  friend bool operator==(const Xoshiro256&, const Xoshiro256&) = default;

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
  static std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
    z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Seed for the index-th independent sub-task of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return Xoshiro256::stream(seed, index + 1)();
}

}  // namespace rcm
