#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "windscen/dist.hpp"

namespace windscen {

/// Deterministic random stream. Normal variates go through the explicit
/// inverse-CDF rather than std::normal_distribution, whose output sequence
/// is implementation-defined; every draw here is reproducible from the
/// seed alone, on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1), never exactly 0 or 1. 53-bit resolution.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_quantile(uniform01()); }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Stable seed derivation for independent sub-streams (FNV-1a over the
/// purpose tag mixed into the base seed).
inline std::uint64_t derive_seed(std::uint64_t base, const std::string& purpose) {
  std::uint64_t h = 14695981039346656037ull ^ base;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace windscen
