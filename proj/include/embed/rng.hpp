#pragma once

#include <cmath>
#include <cstdint>

namespace embed::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream keyed by (seed, stream index): draw k of stream s is a
/// pure function of (seed, s, k), so results do not depend on scheduling.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(mix64(seed + kGamma) ^ (stream * 0xd1b54a32d192ed03ULL + 1))) {}

  std::uint64_t next() { return mix64(key_ + (++counter_) * kGamma); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
  double exponential() { return -std::log(uniform_open()); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Buffered fair coin flips drawn 64 at a time.
class Coin {
 public:
  explicit Coin(Stream& s) : s_(s) {}
  int step() {
    if (left_ == 0) {
      bits_ = s_.next();
      left_ = 64;
    }
    const int v = static_cast<int>(bits_ & 1u) * 2 - 1;
    bits_ >>= 1;
    --left_;
    return v;
  }

 private:
  Stream& s_;
  std::uint64_t bits_ = 0;
  int left_ = 0;
};

}  // namespace embed::rng
