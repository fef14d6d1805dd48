// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "y00/constants.hpp"

namespace y00 {

/// Complex baseband samples per polarization plus power bookkeeping.
///
/// Samples are in sqrt(W) once a physical power has been set (|s|^2 is the
/// instantaneous power of that polarization); straight out of the modulator
/// they are in normalized units. `signal_power` is the noiseless total
/// power over all polarizations and `ase_psd` the accumulated ASE power
/// spectral density per polarization (W/Hz), both tracked through every
/// gain and loss so OSNR can be read back without estimating it.
struct Waveform {
  std::vector<Eigen::VectorXcd> pol;
  double sample_rate = phys::kDacRate;
  double symbol_rate = phys::kSymbolRate;
  double wavelength = phys::kWavelength;
  double signal_power = 0.0;
  double ase_psd = 0.0;

  int pol_count() const { return static_cast<int>(pol.size()); }
  Eigen::Index samples() const { return pol.empty() ? 0 : pol.front().size(); }
  /// Integer samples per symbol; throws if the rates are not commensurate.
  int samples_per_symbol() const;
  Eigen::Index symbols() const { return samples() / samples_per_symbol(); }
  double power_dbm() const;
  /// Mean |s|^2 summed over polarizations (includes noise).
  double measured_power() const;
  /// Uniform scale of field amplitude; power bookkeeping follows.
  void scale(double amplitude_gain);
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

/// Rescales so the bookkept signal power equals `dbm`.
Waveform set_power(Waveform w, double dbm);

/// DFT helpers over Eigen vectors (inverse normalized by 1/N).
Eigen::VectorXcd fft(const Eigen::VectorXcd& x);
Eigen::VectorXcd ifft(const Eigen::VectorXcd& x);
/// Signed bin frequencies: 0, df, ..., -df for an N-point DFT at `sample_rate`.
Eigen::VectorXd fft_frequencies(Eigen::Index n, double sample_rate);

/// Band-limited resampling by spectral truncation or zero padding. Requires
/// samples * new_rate / sample_rate to be an integer.
Waveform resample(const Waveform& w, double new_rate);

/// Circular shift by `samples` (positive delays).
Eigen::VectorXcd circular_delay(const Eigen::VectorXcd& x, Eigen::Index samples);

/// Binary dump: see docs/formats.md ("Y00W" v1, little-endian).
void write_waveform(const Waveform& w, const std::filesystem::path& path);
Waveform read_waveform(const std::filesystem::path& path);

}  // namespace y00
