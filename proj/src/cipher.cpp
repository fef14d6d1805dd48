// SPDX-License-Identifier: Apache-2.0
#include "y00/cipher.hpp"

#include <limits>
#include <string>

namespace y00 {

TemplateConfig::TemplateConfig(int bits_per_quadrature) : bits_(bits_per_quadrature) {
  if (bits_ < kMinBits || bits_ > kMaxBits) {
    throw std::invalid_argument("template bits per quadrature must be in [4, 16], got " +
                                std::to_string(bits_));
  }
  levels_ = 1u << bits_;
  const double L = static_cast<double>(levels_);
  delta_ = std::sqrt(6.0 / (L * L - 1.0));
}

std::uint32_t encrypt_quadrature(int p, int r, std::uint32_t k, const TemplateConfig& tpl) {
  if (p < 0 || p > 3 || r < 0 || r > 3) throw std::out_of_range("dibit outside [0, 4)");
  if (k >= tpl.bases()) throw std::out_of_range("basis index outside [0, M)");
  const std::uint32_t masked = static_cast<std::uint32_t>(p ^ r);
  return k + tpl.bases() * ((masked + k) % 4);
}

int decrypt_quadrature(double a_hat, int r, std::uint32_t k, const TemplateConfig& tpl) {
  if (!std::isfinite(a_hat)) throw std::invalid_argument("non-finite amplitude estimate");
  if (r < 0 || r > 3) throw std::out_of_range("dibit outside [0, 4)");
  if (k >= tpl.bases()) throw std::out_of_range("basis index outside [0, M)");

  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 4; ++m) {
    const double d = std::abs(a_hat - level_amplitude(k + tpl.bases() * m, tpl));
    if (d < best_dist) {
      best_dist = d;
      best = m;
    }
  }
  const int band_shift = static_cast<int>(k % 4);
  return ((best - band_shift + 4) % 4) ^ r;
}

CipherPoint encrypt_symbol(PlainSymbol plain, const RunningKey& rk, const TemplateConfig& tpl) {
  return {encrypt_quadrature(plain.p_i(), rk.r_i, rk.k_i, tpl),
          encrypt_quadrature(plain.p_q(), rk.r_q, rk.k_q, tpl)};
}

PlainSymbol decrypt_symbol(std::complex<double> estimate, const RunningKey& rk,
                           const TemplateConfig& tpl) {
  return PlainSymbol::from_levels(decrypt_quadrature(estimate.real(), rk.r_i, rk.k_i, tpl),
                                  decrypt_quadrature(estimate.imag(), rk.r_q, rk.k_q, tpl));
}

std::uint32_t eve_nearest_level(double a_hat, const TemplateConfig& tpl) {
  if (!std::isfinite(a_hat)) throw std::invalid_argument("non-finite amplitude estimate");
  const double L = static_cast<double>(tpl.levels());
  const double x = a_hat / tpl.delta() + (L - 1.0) / 2.0;
  // round half down so exact midpoints go to the lower level
  const double idx = std::ceil(x - 0.5);
  if (idx <= 0.0) return 0;
  if (idx >= L - 1.0) return tpl.levels() - 1;
  return static_cast<std::uint32_t>(idx);
}

double bob_decision_ratio(const TemplateConfig& tpl) {
  const double L = static_cast<double>(tpl.levels());
  return 12.0 * L * L / (16.0 * (L * L - 1.0));
}

double plain_level_amplitude(int p) {
  if (p < 0 || p > 3) throw std::out_of_range("dibit outside [0, 4)");
  return (2.0 * p - 3.0) / std::sqrt(10.0);
}

std::complex<double> plain_symbol_amplitude(PlainSymbol s) {
  return {plain_level_amplitude(s.p_i()), plain_level_amplitude(s.p_q())};
}

PlainSymbol plain_decide(std::complex<double> z) {
  auto decide = [](double a) {
    const double x = a * std::sqrt(10.0);
    if (x <= -2.0) return 0;
    if (x <= 0.0) return 1;
    if (x <= 2.0) return 2;
    return 3;
  };
  return PlainSymbol::from_levels(decide(z.real()), decide(z.imag()));
}

}  // namespace y00
