#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace avcp {

// Deterministic random stream. Streams are derived from a master seed and a
// stream index, so independent workers (MC runs, Haar-state batches) can draw
// without coordination and a fixed (seed, index) always replays the same
// sequence. The generator is splitmix64 in counter mode: construction is one
// mix, which matters because Monte Carlo assigns one stream per run. Variates
// come from the raw engine output rather than std::*_distribution, whose
// results vary across standard library implementations.
class RngStream {
public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : state_(mix(master_seed + 0x632be59bd9b4e019ULL,
                   stream_index ^ 0x9e3779b97f4a7c15ULL)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; generates pairs, caches the spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

private:
  static constexpr double kPi = 3.14159265358979323846;

  // splitmix64 finalizer over (seed, index) separates the streams.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace avcp
