// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "y00/random.hpp"
#include "y00/waveform.hpp"

namespace y00 {

struct SpanConfig {
  double length_km = 80.0;
  double attenuation_db_per_km = 0.2;
  double dispersion_ps_nm_km = 17.0;

  double loss_db() const { return length_km * attenuation_db_per_km; }
  double dispersion_ps_nm() const { return length_km * dispersion_ps_nm_km; }
};

struct AmplifierConfig {
  double gain_db = 16.0;
  double noise_figure_db = 5.0;

  /// n_sp = NF / 2 (linear).
  double spontaneous_emission_factor() const;
};

/// Booster plus `spans` identical spans, each followed by an inline
/// amplifier restoring the launch power.
struct LinkConfig {
  int spans = 4;
  SpanConfig span;
  double tx_power_dbm = -16.5;      // modulator output, tap A
  double launch_power_dbm = -2.0;   // after the booster, tap B
  double noise_figure_db = 5.0;     // booster and inline amplifiers
  double wavelength = phys::kWavelength;

  double total_dispersion_ps_nm() const { return spans * span.dispersion_ps_nm(); }
  AmplifierConfig booster() const;
  AmplifierConfig inline_amp() const;
};

struct NoiseBudget {
  double power_dbm = -10.0;
  double symbol_rate = phys::kSymbolRate;
  double wavelength = phys::kWavelength;
  /// Additive Gaussian variance per quadrature in photon units, on top of
  /// the 1/2 shot-noise floor.
  double extra_noise_var = 0.0;

  double photon_energy() const { return phys::photon_energy(wavelength); }
  /// n = P / (h nu Rs)
  double mean_photons() const;
};

enum class TapPoint { A, B };

/// Eve's observation conditions at a tap: detected power and the extra
/// per-quadrature variance (booster ASE for B, plus receiver extras).
NoiseBudget tap_budget(TapPoint tap, const LinkConfig& link, double extra_rx_noise_var = 0.0);

enum class CdSign { Forward = 1, Inverse = -1 };

/// All-pass H(f) = exp(s j pi D lambda^2 f^2 / c), D in ps/nm.
Waveform apply_cd(const Waveform& w, double total_dispersion_ps_nm, CdSign sign);

Waveform apply_loss(const Waveform& w, double loss_db);

/// Gain plus circular complex ASE of PSD n_sp h nu (G - 1) per polarization
/// over the full simulation bandwidth.
Waveform amplify_with_ase(const Waveform& w, const AmplifierConfig& amp, Rng& rng);

/// OSNR in the 12.5 GHz reference bandwidth: signal power per polarization
/// over the per-polarization ASE power in that bandwidth. For a
/// dual-polarization signal this is the usual two-polarization OSNR.
double measure_osnr(const Waveform& w);

/// Tops up white ASE so measure_osnr reads `osnr_db`. An infinite target is
/// a no-op.
Waveform load_osnr(const Waveform& w, double osnr_db, Rng& rng);

/// Per-polarization symbol SNR implied by an OSNR: OSNR * B_ref / Rs.
double osnr_to_snr_db(double osnr_db, double symbol_rate = phys::kSymbolRate);
double snr_to_osnr_db(double snr_db, double symbol_rate = phys::kSymbolRate);

/// Closed-form OSNR at the end of the link (booster + all spans).
double link_osnr_db(const LinkConfig& link, int pol_count = 2);
/// OSNR right after the booster.
double booster_osnr_db(const LinkConfig& link, int pol_count = 2);
/// Noise figure that makes link_osnr_db hit `target_osnr_db`.
double calibrate_noise_figure_db(const LinkConfig& link, double target_osnr_db,
                                 int pol_count = 2);

/// Symbol-level detection: scales normalized amplitudes by sqrt(n) and adds
/// N(0, 1/2 + extra) per quadrature. Output is in photon units.
Eigen::VectorXd detect_shot_noise(const Eigen::VectorXd& amplitudes, const NoiseBudget& budget,
                                  Rng& rng);
Eigen::VectorXcd detect_shot_noise(const Eigen::VectorXcd& symbols, const NoiseBudget& budget,
                                   Rng& rng);

/// Waveform-level counterpart: attenuates to the detected power and adds
/// white noise of PSD h nu (1 + 2 extra) per polarization.
Waveform detect_waveform(const Waveform& w, const NoiseBudget& budget, Rng& rng);

struct LoConfig {
  double freq_offset_hz = 300e6;
  double linewidth_hz = 1e3;  // per laser; transmitter and LO both contribute
};

/// Multiplies by exp(j(2 pi df t + phi(t))) with phi a Wiener process of
/// per-sample variance 2 pi (2 linewidth) / fs. The same LO drives both
/// polarizations. Optionally returns the injected phase per sample.
Waveform lo_impairments(const Waveform& w, const LoConfig& lo, Rng& rng,
                        Eigen::VectorXd* phase_trace = nullptr);

struct RxFrontendConfig {
  double bandwidth_hz = 32e9;
  int filter_order = 4;
  double adc_rate = phys::kAdcRate;
  int adc_bits = 8;
  bool quantize = true;
  double full_scale_sigma = 4.0;
};

/// Uniform mid-rise quantizer with 2^bits levels on [-full_scale, full_scale].
double quantize_uniform(double x, int bits, double full_scale);

/// Butterworth-magnitude low-pass, resampling to the ADC rate, and per-
/// quadrature quantization at +/- full_scale_sigma RMS.
Waveform rx_frontend(const Waveform& w, const RxFrontendConfig& cfg);

}  // namespace y00
