// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "y00/cipher.hpp"
#include "y00/waveform.hpp"

namespace y00 {

struct DacModel {
  int resolution_bits = 8;
  double sample_rate = phys::kDacRate;
  double full_scale = 1.0;  // normalized volts
  std::optional<std::int64_t> memory_samples;

  /// Output voltage for code u: the 2^b uniform values spanning [-FS, +FS].
  double output(std::uint32_t code) const;
};

enum class Transfer { Linear, Sinusoidal };

struct ModulatorConfig {
  double v_pi = 6.0;
  /// Segment-1 to segment-2 drive voltage ratio g. The nominal 6 dB power
  /// offset is one octave in voltage, so the default is exactly 2.
  double segment_voltage_ratio = 2.0;
  Transfer transfer = Transfer::Linear;

  static double voltage_ratio_from_db(double power_ratio_db);
};

enum class ModulationMode { Ideal, Hardware };

/// Bits b16..b1 of a 16-bit level (b16 = MSB). Even-indexed bits
/// (b16, b14, ..., b2) drive segment 1, odd-indexed bits segment 2.
std::pair<std::uint8_t, std::uint8_t> split_even_odd(std::uint16_t word);
std::uint16_t merge_even_odd(std::uint8_t w1, std::uint8_t w2);

/// Normalized field of one quadrature in hardware mode (in [-1, 1]).
double hardware_field(std::uint32_t level, const DacModel& dac, const ModulatorConfig& mod);

/// Single-polarization waveform with rectangular pulses at
/// dac.sample_rate / symbol_rate samples per symbol.
Waveform modulate(std::span<const CipherPoint> points, const TemplateConfig& tpl,
                  ModulationMode mode, const DacModel& dac = {}, const ModulatorConfig& mod = {},
                  double symbol_rate = phys::kSymbolRate);

/// Same pulse shaping for an already-mapped symbol stream (plain 16-QAM).
Waveform modulate_symbols(std::span<const std::complex<double>> symbols, double sample_rate,
                          double symbol_rate = phys::kSymbolRate);

enum class PdmMode { DelayedCopy, Independent };

/// Circular copy onto the y polarization.
Waveform pdm_delayed_copy(const Waveform& x, std::int64_t delay_symbols = 1199);
/// Stacks two independently generated single-polarization streams.
Waveform pdm_combine(const Waveform& x, const Waveform& y);
Waveform pdm_emulate(const Waveform& x, std::int64_t delay_symbols, PdmMode mode,
                     const Waveform* y_independent = nullptr);

}  // namespace y00
