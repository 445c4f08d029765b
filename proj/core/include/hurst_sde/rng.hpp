#pragma once

#include <cstdint>
#include <random>

namespace hurst_sde {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of replication `index` of an experiment with `master` seed. The
/// mapping depends only on the pair, so replications can run in any order.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Random source for path generation.
///
/// Stream version 1: std::mt19937_64 (output fixed by the C++ standard) seeded
/// with splitmix64(seed); uniforms take the top 53 bits; normals use the
/// Marsaglia polar method. None of the steps depend on the standard library's
/// distribution implementations, so streams are identical across toolchains
/// up to libm rounding of log/sqrt.
class Rng {
 public:
  static constexpr int kStreamVersion = 1;

  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hurst_sde
