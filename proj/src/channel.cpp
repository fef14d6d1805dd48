// SPDX-License-Identifier: Apache-2.0
#include "y00/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace y00 {
namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void add_white_noise(Waveform& w, double psd_per_pol, Rng& rng) {
  if (psd_per_pol <= 0.0) return;
  const double variance = psd_per_pol * w.sample_rate;
  for (auto& x : w.pol) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += rng.complex_normal(variance);
  }
}

}  // namespace

double AmplifierConfig::spontaneous_emission_factor() const {
  return db_to_linear(noise_figure_db) / 2.0;
}

AmplifierConfig LinkConfig::booster() const {
  return {launch_power_dbm - tx_power_dbm, noise_figure_db};
}

AmplifierConfig LinkConfig::inline_amp() const { return {span.loss_db(), noise_figure_db}; }

double NoiseBudget::mean_photons() const {
  return dbm_to_watt(power_dbm) / (photon_energy() * symbol_rate);
}

NoiseBudget tap_budget(TapPoint tap, const LinkConfig& link, double extra_rx_noise_var) {
  NoiseBudget b;
  b.wavelength = link.wavelength;
  b.extra_noise_var = extra_rx_noise_var;
  if (tap == TapPoint::A) {
    b.power_dbm = link.tx_power_dbm;
  } else {
    // booster ASE of n_sp (G - 1) photons per mode, half per quadrature
    const AmplifierConfig amp = link.booster();
    const double g = db_to_linear(amp.gain_db);
    b.power_dbm = link.launch_power_dbm;
    b.extra_noise_var += amp.spontaneous_emission_factor() * (g - 1.0) / 2.0;
  }
  return b;
}

Waveform apply_cd(const Waveform& w, double total_dispersion_ps_nm, CdSign sign) {
  if (!(w.sample_rate > 0.0)) throw std::invalid_argument("apply_cd: sample rate must be positive");
  if (total_dispersion_ps_nm == 0.0) return w;
  const double d_si = total_dispersion_ps_nm * 1e-3;  // ps/nm -> s/m
  const double k = static_cast<double>(sign) * phys::kPi * d_si * w.wavelength * w.wavelength /
                   phys::kLightSpeed;
  Waveform out = w;
  const Eigen::VectorXd f = fft_frequencies(w.samples(), w.sample_rate);
  Eigen::VectorXcd h(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) h[i] = std::polar(1.0, k * f[i] * f[i]);
  for (auto& x : out.pol) x = ifft(fft(x).cwiseProduct(h));
  return out;
}

Waveform apply_loss(const Waveform& w, double loss_db) {
  Waveform out = w;
  out.scale(std::pow(10.0, -loss_db / 20.0));
  return out;
}

Waveform amplify_with_ase(const Waveform& w, const AmplifierConfig& amp, Rng& rng) {
  const double g = db_to_linear(amp.gain_db);
  if (g < 1.0) throw std::invalid_argument("amplifier gain must be >= 0 dB");
  Waveform out = w;
  out.scale(std::sqrt(g));
  const double psd = amp.spontaneous_emission_factor() * phys::photon_energy(w.wavelength) * (g - 1.0);
  add_white_noise(out, psd, rng);
  out.ase_psd += psd;
  return out;
}

double measure_osnr(const Waveform& w) {
  if (w.ase_psd <= 0.0) return std::numeric_limits<double>::infinity();
  const double per_pol_signal = w.signal_power / w.pol_count();
  return 10.0 * std::log10(per_pol_signal / (w.ase_psd * phys::kOsnrReferenceBandwidth));
}

Waveform load_osnr(const Waveform& w, double osnr_db, Rng& rng) {
  if (std::isinf(osnr_db) && osnr_db > 0) return w;
  if (!std::isfinite(osnr_db)) throw std::invalid_argument("OSNR target must be finite or +inf");
  if (osnr_db < -10.0) throw std::invalid_argument("OSNR target below -10 dB");
  const double per_pol_signal = w.signal_power / w.pol_count();
  const double target_psd = per_pol_signal / (db_to_linear(osnr_db) * phys::kOsnrReferenceBandwidth);
  const double top_up = target_psd - w.ase_psd;
  if (top_up < -1e-12 * target_psd) {
    throw std::invalid_argument("waveform already noisier than the OSNR target");
  }
  Waveform out = w;
  add_white_noise(out, top_up, rng);
  out.ase_psd = target_psd;
  return out;
}

double osnr_to_snr_db(double osnr_db, double symbol_rate) {
  return osnr_db - 10.0 * std::log10(symbol_rate / phys::kOsnrReferenceBandwidth);
}

double snr_to_osnr_db(double snr_db, double symbol_rate) {
  return snr_db + 10.0 * std::log10(symbol_rate / phys::kOsnrReferenceBandwidth);
}

namespace {

// ASE PSD per polarization at the link output, in units of h nu.
double link_psd_photons(const LinkConfig& link, bool include_spans) {
  const double nsp = db_to_linear(link.noise_figure_db) / 2.0;
  double total = nsp * (db_to_linear(link.booster().gain_db) - 1.0);
  // inline gains exactly undo span loss, so each stage's noise is referred 1:1
  if (include_spans) total += link.spans * nsp * (db_to_linear(link.inline_amp().gain_db) - 1.0);
  return total;
}

double osnr_from_psd(const LinkConfig& link, double psd_photons, int pol_count) {
  const double psd = psd_photons * phys::photon_energy(link.wavelength);
  const double per_pol = dbm_to_watt(link.launch_power_dbm) / pol_count;
  return 10.0 * std::log10(per_pol / (psd * phys::kOsnrReferenceBandwidth));
}

}  // namespace

double link_osnr_db(const LinkConfig& link, int pol_count) {
  return osnr_from_psd(link, link_psd_photons(link, true), pol_count);
}

double booster_osnr_db(const LinkConfig& link, int pol_count) {
  return osnr_from_psd(link, link_psd_photons(link, false), pol_count);
}

double calibrate_noise_figure_db(const LinkConfig& link, double target_osnr_db, int pol_count) {
  // OSNR is linear in 1/n_sp, so one evaluation at NF = 0 dB fixes it
  LinkConfig probe = link;
  probe.noise_figure_db = 0.0;
  const double osnr_at_0db = link_osnr_db(probe, pol_count);
  return osnr_at_0db - target_osnr_db;
}

Eigen::VectorXd detect_shot_noise(const Eigen::VectorXd& amplitudes, const NoiseBudget& budget,
                                  Rng& rng) {
  const double nbar = budget.mean_photons();
  const double sigma = std::sqrt(0.5 + budget.extra_noise_var);
  Eigen::VectorXd out = amplitudes * std::sqrt(nbar);
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += sigma * rng.normal();
  return out;
}

Eigen::VectorXcd detect_shot_noise(const Eigen::VectorXcd& symbols, const NoiseBudget& budget,
                                   Rng& rng) {
  const double nbar = budget.mean_photons();
  const double sigma = std::sqrt(0.5 + budget.extra_noise_var);
  Eigen::VectorXcd out = symbols * std::sqrt(nbar);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    out[i] += std::complex<double>(sigma * re, sigma * im);
  }
  return out;
}

Waveform detect_waveform(const Waveform& w, const NoiseBudget& budget, Rng& rng) {
  Waveform out = set_power(w, budget.power_dbm);
  const double psd = phys::photon_energy(out.wavelength) * (1.0 + 2.0 * budget.extra_noise_var);
  add_white_noise(out, psd, rng);
  return out;
}

Waveform lo_impairments(const Waveform& w, const LoConfig& lo, Rng& rng,
                        Eigen::VectorXd* phase_trace) {
  if (lo.linewidth_hz < 0.0) throw std::invalid_argument("linewidth must be non-negative");
  const Eigen::Index n = w.samples();
  const double dt = 1.0 / w.sample_rate;
  const double step_sigma = std::sqrt(2.0 * phys::kPi * 2.0 * lo.linewidth_hz * dt);
  Eigen::VectorXd phase(n);
  double wiener = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    phase[i] = 2.0 * phys::kPi * lo.freq_offset_hz * dt * static_cast<double>(i) + wiener;
    if (step_sigma > 0.0) wiener += step_sigma * rng.normal();
  }
  Waveform out = w;
  if (lo.freq_offset_hz != 0.0 || step_sigma > 0.0) {
    Eigen::VectorXcd rot(n);
    for (Eigen::Index i = 0; i < n; ++i) rot[i] = std::polar(1.0, phase[i]);
    for (auto& x : out.pol) x = x.cwiseProduct(rot);
  }
  if (phase_trace != nullptr) *phase_trace = std::move(phase);
  return out;
}

double quantize_uniform(double x, int bits, double full_scale) {
  const double levels = std::ldexp(1.0, bits);
  const double step = 2.0 * full_scale / levels;
  double idx = std::floor((x + full_scale) / step);
  if (idx < 0.0) idx = 0.0;
  if (idx > levels - 1.0) idx = levels - 1.0;
  return (idx + 0.5) * step - full_scale;
}

Waveform rx_frontend(const Waveform& w, const RxFrontendConfig& cfg) {
  const double exact = static_cast<double>(w.samples()) * cfg.adc_rate / w.sample_rate;
  if (std::abs(exact - std::round(exact)) > 1e-6) {
    throw std::invalid_argument("rx_frontend: frame length does not map onto the ADC rate");
  }
  Waveform out = w;
  const Eigen::VectorXd f = fft_frequencies(w.samples(), w.sample_rate);
  Eigen::VectorXd h(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    h[i] = 1.0 / std::sqrt(1.0 + std::pow(std::abs(f[i]) / cfg.bandwidth_hz, 2 * cfg.filter_order));
  }
  for (auto& x : out.pol) x = ifft(fft(x).cwiseProduct(h.cast<std::complex<double>>()));
  out = resample(out, cfg.adc_rate);

  if (cfg.quantize) {
    for (auto& x : out.pol) {
      const double n = static_cast<double>(x.size());
      const double sigma_i = std::sqrt(x.real().squaredNorm() / n);
      const double sigma_q = std::sqrt(x.imag().squaredNorm() / n);
      const double fs_i = cfg.full_scale_sigma * sigma_i;
      const double fs_q = cfg.full_scale_sigma * sigma_q;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        x[i] = {quantize_uniform(x[i].real(), cfg.adc_bits, fs_i),
                quantize_uniform(x[i].imag(), cfg.adc_bits, fs_q)};
      }
    }
  }
  return out;
}

}  // namespace y00
