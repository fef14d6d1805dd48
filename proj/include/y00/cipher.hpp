// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "y00/keystream.hpp"

namespace y00 {

/// Cipher template geometry: L = 2^n levels per quadrature split into
/// M = L/4 bases. Level spacing is chosen so a uniformly random symbol has
/// unit energy over both quadratures.
class TemplateConfig {
 public:
  static constexpr int kMinBits = 4;
  static constexpr int kMaxBits = 16;

  explicit TemplateConfig(int bits_per_quadrature);

  int bits() const { return bits_; }
  std::uint32_t levels() const { return levels_; }
  std::uint32_t bases() const { return levels_ / 4; }
  double delta() const { return delta_; }
  /// Total constellation size exponent: the template is 2^(2n)-QAM.
  int total_bits() const { return 2 * bits_; }

  friend bool operator==(const TemplateConfig&, const TemplateConfig&) = default;

 private:
  int bits_;
  std::uint32_t levels_;
  double delta_;
};

/// Reflected Gray code on one quadrature: 00->0, 01->1, 11->2, 10->3.
constexpr int gray_to_level(int dibit) {
  constexpr int table[4] = {0, 1, 3, 2};
  return table[dibit & 3];
}
constexpr int level_to_gray(int level) {
  constexpr int table[4] = {0, 1, 3, 2};
  return table[level & 3];
}

/// One 16-QAM plaintext symbol. The high dibit drives I, the low dibit Q.
struct PlainSymbol {
  std::uint8_t bits = 0;

  static PlainSymbol from_levels(int p_i, int p_q) {
    return PlainSymbol{static_cast<std::uint8_t>((level_to_gray(p_i) << 2) | level_to_gray(p_q))};
  }
  int p_i() const { return gray_to_level(bits >> 2); }
  int p_q() const { return gray_to_level(bits & 3); }

  friend bool operator==(const PlainSymbol&, const PlainSymbol&) = default;
};

struct CipherPoint {
  std::uint32_t l_i = 0;
  std::uint32_t l_q = 0;

  friend bool operator==(const CipherPoint&, const CipherPoint&) = default;
};

/// a(l) = delta * (l - (L-1)/2).
template <typename Scalar = double>
Scalar level_amplitude(std::uint32_t level, const TemplateConfig& tpl) {
  if (level >= tpl.levels()) throw std::out_of_range("level index outside template");
  const Scalar half_span = (static_cast<Scalar>(tpl.levels()) - Scalar(1)) / Scalar(2);
  return static_cast<Scalar>(tpl.delta()) * (static_cast<Scalar>(level) - half_span);
}

template <typename Scalar = double>
std::complex<Scalar> point_amplitude(const CipherPoint& pt, const TemplateConfig& tpl) {
  return {level_amplitude<Scalar>(pt.l_i, tpl), level_amplitude<Scalar>(pt.l_q, tpl)};
}

/// l = k + M((p XOR r + k) mod 4).
std::uint32_t encrypt_quadrature(int p, int r, std::uint32_t k, const TemplateConfig& tpl);

/// Amplitude-subtraction decision: picks the nearest of the four candidate
/// levels k + M m (lower m on ties) and undoes the basis rotation and XOR.
int decrypt_quadrature(double a_hat, int r, std::uint32_t k, const TemplateConfig& tpl);

CipherPoint encrypt_symbol(PlainSymbol plain, const RunningKey& rk, const TemplateConfig& tpl);
PlainSymbol decrypt_symbol(std::complex<double> estimate, const RunningKey& rk,
                           const TemplateConfig& tpl);

/// Eve's detector: clamped nearest fine level (lower index on ties).
std::uint32_t eve_nearest_level(double a_hat, const TemplateConfig& tpl);

/// (M delta)^2 over the per-quadrature mean energy, 12L^2 / (16(L^2-1)).
double bob_decision_ratio(const TemplateConfig& tpl);

/// Plain Gray-coded 16-QAM with unit average energy: levels (2p-3)/sqrt(10).
double plain_level_amplitude(int p);
std::complex<double> plain_symbol_amplitude(PlainSymbol s);
PlainSymbol plain_decide(std::complex<double> z);

}  // namespace y00
