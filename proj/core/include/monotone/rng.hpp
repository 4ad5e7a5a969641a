#pragma once

#include <cstdint>

namespace monotone {

/// Counter-based generator: draw n of stream (seed, id) is a SplitMix64
/// finalizer applied to a key derived from both, so streams can be indexed
/// directly without sequential splitting.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t id) noexcept
      : key_(mix(seed ^ mix(id + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t n) const noexcept {
    return mix(key_ + (n + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on (0, 1]: never exactly 0, so it is always a valid G level.
  double uniform(std::uint64_t n) const noexcept {
    return static_cast<double>((bits(n) >> 11) + 1) * 0x1.0p-53;
  }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

/// Stream ids used by the simulators. The coupling stream is shared by every
/// initial state of a bundle; Monte Carlo paths get their own pair.
namespace streams {
inline constexpr std::uint64_t kCoupling = 0;
inline constexpr std::uint64_t kInitial = 1;
inline std::uint64_t path_initial(std::uint64_t path) noexcept { return 2 * path + 2; }
inline std::uint64_t path_steps(std::uint64_t path) noexcept { return 2 * path + 3; }
}  // namespace streams

}  // namespace monotone
