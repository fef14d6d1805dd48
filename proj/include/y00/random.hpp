// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "y00/keystream.hpp"

namespace y00 {

/// Reproducible noise source. mt19937_64 is fully specified by the
/// standard; the uniform and Gaussian transforms are done here rather than
/// through <random> distributions so draws are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  explicit Rng(const SeedKey& key) : engine_(seed_from_key(key)) {}

  static std::uint64_t seed_from_key(const SeedKey& key) {
    std::uint64_t s = 0;
    for (int i = 0; i < 8; ++i) s |= std::uint64_t{key.bytes[i]} << (8 * i);
    return s;
  }

  std::uint64_t bits() { return engine_(); }

  /// Uniform on (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal (Box-Muller, both outputs used).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Circular complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace y00
