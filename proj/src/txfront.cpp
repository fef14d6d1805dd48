// SPDX-License-Identifier: Apache-2.0
#include "y00/txfront.hpp"

#include <cmath>
#include <stdexcept>

namespace y00 {

double DacModel::output(std::uint32_t code) const {
  const std::uint32_t top = (1u << resolution_bits) - 1u;
  if (code > top) throw std::out_of_range("DAC code outside resolution");
  return full_scale * (2.0 * code - top) / static_cast<double>(top);
}

double ModulatorConfig::voltage_ratio_from_db(double power_ratio_db) {
  return std::pow(10.0, power_ratio_db / 20.0);
}

std::pair<std::uint8_t, std::uint8_t> split_even_odd(std::uint16_t word) {
  std::uint8_t w1 = 0;
  std::uint8_t w2 = 0;
  // b16 is bit 15 of the word; even-indexed b_{2j} sit at odd bit positions
  for (int j = 7; j >= 0; --j) {
    w1 = static_cast<std::uint8_t>((w1 << 1) | ((word >> (2 * j + 1)) & 1u));
    w2 = static_cast<std::uint8_t>((w2 << 1) | ((word >> (2 * j)) & 1u));
  }
  return {w1, w2};
}

std::uint16_t merge_even_odd(std::uint8_t w1, std::uint8_t w2) {
  std::uint16_t word = 0;
  for (int j = 0; j < 8; ++j) {
    word |= static_cast<std::uint16_t>(((w1 >> j) & 1u) << (2 * j + 1));
    word |= static_cast<std::uint16_t>(((w2 >> j) & 1u) << (2 * j));
  }
  return word;
}

double hardware_field(std::uint32_t level, const DacModel& dac, const ModulatorConfig& mod) {
  if (level > 0xFFFFu) throw std::out_of_range("hardware mode drives 16-bit levels");
  const auto [w1, w2] = split_even_odd(static_cast<std::uint16_t>(level));
  const double g = mod.segment_voltage_ratio;
  const double v_eff = g * dac.output(w1) + dac.output(w2);
  const double v_max = (g + 1.0) * dac.full_scale;
  if (mod.transfer == Transfer::Linear) return v_eff / v_max;
  const double k = phys::kPi / (2.0 * mod.v_pi);
  return std::sin(k * v_eff) / std::sin(k * v_max);
}

namespace {

Waveform hold_symbols(const Eigen::VectorXcd& sym, int sps, double symbol_rate) {
  Waveform w;
  w.symbol_rate = symbol_rate;
  w.sample_rate = symbol_rate * sps;
  Eigen::VectorXcd x(sym.size() * sps);
  for (Eigen::Index n = 0; n < sym.size(); ++n) x.segment(n * sps, sps).setConstant(sym[n]);
  w.signal_power = x.size() ? x.squaredNorm() / static_cast<double>(x.size()) : 0.0;
  w.pol.push_back(std::move(x));
  return w;
}

int samples_per_symbol(double sample_rate, double symbol_rate) {
  const double r = sample_rate / symbol_rate;
  if (std::abs(r - std::round(r)) > 1e-9 * r || r < 1.0) {
    throw std::invalid_argument("sample rate must be an integer multiple of the symbol rate");
  }
  return static_cast<int>(std::round(r));
}

}  // namespace

Waveform modulate(std::span<const CipherPoint> points, const TemplateConfig& tpl,
                  ModulationMode mode, const DacModel& dac, const ModulatorConfig& mod,
                  double symbol_rate) {
  if (mode == ModulationMode::Hardware && tpl.bits() != 16) {
    throw std::invalid_argument("hardware mode requires a 16-bit-per-quadrature template");
  }
  const int sps = samples_per_symbol(dac.sample_rate, symbol_rate);
  Eigen::VectorXcd sym(static_cast<Eigen::Index>(points.size()));
  for (std::size_t n = 0; n < points.size(); ++n) {
    const CipherPoint& pt = points[n];
    if (mode == ModulationMode::Ideal) {
      sym[n] = point_amplitude(pt, tpl);
    } else {
      sym[n] = {hardware_field(pt.l_i, dac, mod), hardware_field(pt.l_q, dac, mod)};
    }
  }
  return hold_symbols(sym, sps, symbol_rate);
}

Waveform modulate_symbols(std::span<const std::complex<double>> symbols, double sample_rate,
                          double symbol_rate) {
  const int sps = samples_per_symbol(sample_rate, symbol_rate);
  Eigen::VectorXcd sym(static_cast<Eigen::Index>(symbols.size()));
  for (std::size_t n = 0; n < symbols.size(); ++n) sym[n] = symbols[n];
  return hold_symbols(sym, sps, symbol_rate);
}

Waveform pdm_delayed_copy(const Waveform& x, std::int64_t delay_symbols) {
  if (x.pol_count() != 1) throw std::invalid_argument("PDM emulation takes one polarization");
  if (delay_symbols < 0) throw std::invalid_argument("PDM delay must be non-negative");
  Waveform out = x;
  out.pol.push_back(circular_delay(x.pol[0], delay_symbols * x.samples_per_symbol()));
  out.signal_power = 2.0 * x.signal_power;
  return out;
}

Waveform pdm_combine(const Waveform& x, const Waveform& y) {
  if (x.pol_count() != 1 || y.pol_count() != 1) {
    throw std::invalid_argument("PDM combine takes two single-polarization streams");
  }
  if (x.samples() != y.samples() || x.sample_rate != y.sample_rate) {
    throw std::invalid_argument("PDM combine: streams differ in length or rate");
  }
  Waveform out = x;
  out.pol.push_back(y.pol[0]);
  out.signal_power = x.signal_power + y.signal_power;
  return out;
}

Waveform pdm_emulate(const Waveform& x, std::int64_t delay_symbols, PdmMode mode,
                     const Waveform* y_independent) {
  if (mode == PdmMode::DelayedCopy) return pdm_delayed_copy(x, delay_symbols);
  if (y_independent == nullptr) throw std::invalid_argument("independent PDM needs a y stream");
  return pdm_combine(x, *y_independent);
}

}  // namespace y00
