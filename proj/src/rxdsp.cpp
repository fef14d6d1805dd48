// SPDX-License-Identifier: Apache-2.0
#include "y00/rxdsp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace y00 {

void EqualizerConfig::validate() const {
  if (taps < 1 || taps % 2 == 0) throw std::invalid_argument("equalizer taps must be odd");
  if (!(pilot_ratio > 0.0 && pilot_ratio < 0.5)) {
    throw std::invalid_argument("pilot_ratio must lie in (0, 0.5)");
  }
  if (preconvergence_symbols < taps) {
    throw std::invalid_argument("preconvergence_symbols must be at least the tap count");
  }
  if (!(step_size > 0.0) || !(tracking_step_size >= 0.0)) {
    throw std::invalid_argument("step sizes must be positive");
  }
  if (!(pll_bandwidth >= 0.0 && pll_bandwidth < 0.5)) {
    throw std::invalid_argument("pll_bandwidth must lie in [0, 0.5)");
  }
}

int EqualizerConfig::pilot_period() const { return static_cast<int>(std::floor(1.0 / pilot_ratio)); }

bool EqualizerConfig::is_training(Eigen::Index symbol) const {
  if (symbol < preconvergence_symbols) return true;
  return (symbol - preconvergence_symbols) % pilot_period() == 0;
}

std::complex<double> KeyAidedDecider::decide(int pol, Eigen::Index symbol,
                                             std::complex<double> z) const {
  const RunningKey& rk = keys_[pol][symbol];
  const PlainSymbol p = decrypt_symbol(z, rk, tpl_);
  return point_amplitude(encrypt_symbol(p, rk, tpl_), tpl_);
}

Waveform cdc(const Waveform& w, const LinkConfig& link) {
  return apply_cd(w, link.total_dispersion_ps_nm(), CdSign::Inverse);
}

FrequencyEstimate freq_recover(const Waveform& w) {
  const Eigen::Index n = w.samples();
  if (n < 16) throw std::invalid_argument("freq_recover: waveform too short");
  Eigen::VectorXd power = Eigen::VectorXd::Zero(n);
  for (const auto& x : w.pol) {
    const Eigen::VectorXcd x4 = x.array().square().square().matrix();
    power += fft(x4).cwiseAbs2();
  }
  const Eigen::VectorXd f = fft_frequencies(n, w.sample_rate);
  // tone at 4 df; search |4 df| < Rs / 2
  const double limit = w.symbol_rate / 2.0;
  Eigen::Index best = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(f[k]) < limit && power[k] > power[best]) best = k;
  }
  double offset_bins = 0.0;
  const double p0 = power[(best - 1 + n) % n];
  const double p1 = power[best];
  const double p2 = power[(best + 1) % n];
  const double denom = p0 - 2.0 * p1 + p2;
  if (denom < 0.0) offset_bins = 0.5 * (p0 - p2) / denom;

  FrequencyEstimate est;
  const double df = w.sample_rate / static_cast<double>(n);
  est.f_est_hz = (f[best] + offset_bins * df) / 4.0;
  const double mean_power = power.mean();
  est.peak_ratio = mean_power > 0.0 ? p1 / mean_power : 0.0;
  est.locked = est.peak_ratio > 20.0;

  est.waveform = w;
  const double step = -2.0 * phys::kPi * est.f_est_hz / w.sample_rate;
  Eigen::VectorXcd rot(n);
  for (Eigen::Index i = 0; i < n; ++i) rot[i] = std::polar(1.0, step * static_cast<double>(i));
  for (auto& x : est.waveform.pol) x = x.cwiseProduct(rot);
  return est;
}

SymbolEstimates mimo_lms_pll(const Waveform& w, const std::vector<Eigen::VectorXcd>& reference,
                             const SymbolDecider& decider, const EqualizerConfig& cfg) {
  cfg.validate();
  if (w.samples_per_symbol() != 2) throw std::invalid_argument("equalizer expects 2 samples/symbol");
  const int npol = w.pol_count();
  if (npol < 1 || npol > 2) throw std::invalid_argument("equalizer takes 1 or 2 polarizations");
  if (static_cast<int>(reference.size()) != npol) {
    throw std::invalid_argument("one reference sequence per polarization required");
  }
  const Eigen::Index nsym = w.symbols();
  for (const auto& r : reference) {
    if (r.size() < std::min<Eigen::Index>(nsym, cfg.preconvergence_symbols)) {
      throw std::invalid_argument("reference shorter than the training span");
    }
  }

  const int ntaps = cfg.taps;
  const int half = (ntaps - 1) / 2;
  const Eigen::Index pad = half + 2;

  // circular extension after AGC to unit power per sample
  std::vector<Eigen::VectorXcd> ext(npol);
  for (int q = 0; q < npol; ++q) {
    const Eigen::VectorXcd& x = w.pol[q];
    const Eigen::Index n = x.size();
    const double rms = std::sqrt(x.squaredNorm() / static_cast<double>(n));
    const double agc = rms > 0.0 ? 1.0 / rms : 1.0;
    ext[q].resize(n + 2 * pad);
    ext[q].head(pad) = x.tail(pad) * agc;
    ext[q].segment(pad, n) = x * agc;
    ext[q].tail(pad) = x.head(pad) * agc;
  }

  SymbolEstimates est;
  est.taps.assign(npol, std::vector<Eigen::VectorXcd>(npol, Eigen::VectorXcd::Zero(ntaps)));
  for (int p = 0; p < npol; ++p) {
    if (cfg.lowpass_init && ntaps >= 3) {
      // half-band start: zero response at fs/2, where only noise lives
      est.taps[p][p][half - 1] = 0.25;
      est.taps[p][p][half] = 0.5;
      est.taps[p][p][half + 1] = 0.25;
    } else {
      est.taps[p][p][half] = 1.0;
    }
  }
  est.symbols.assign(npol, Eigen::VectorXcd::Zero(nsym));
  est.pll_phase.assign(npol, Eigen::VectorXd::Zero(nsym));

  const double pll_gain = 2.0 * phys::kPi * cfg.pll_bandwidth;
  std::vector<double> theta(npol, 0.0);

  double pre_err = 0.0;
  Eigen::Index pre_count = 0;
  double trk_err = 0.0;
  Eigen::Index trk_count = 0;
  const Eigen::Index pre_window_start =
      std::max<Eigen::Index>(0, cfg.preconvergence_symbols - 1000);

  // extra passes over the preamble only adapt; the final pass records
  const Eigen::Index pre_len = std::min<Eigen::Index>(cfg.preconvergence_symbols, nsym);
  for (int pass = 1; pass < cfg.preconvergence_passes; ++pass) {
    for (Eigen::Index n = 0; n < pre_len; ++n) {
      const Eigen::Index start = pad + 2 * n + 1 - half;
      for (int p = 0; p < npol; ++p) {
        std::complex<double> y = 0.0;
        for (int q = 0; q < npol; ++q) y += est.taps[p][q].cwiseProduct(ext[q].segment(start, ntaps)).sum();
        const std::complex<double> derot = std::polar(1.0, -theta[p]);
        const std::complex<double> z = y * derot;
        const std::complex<double> d = reference[p][n];
        theta[p] += pll_gain * std::imag(z * std::conj(d));
        const std::complex<double> grad = cfg.step_size * (d - z) * std::conj(derot);
        for (int q = 0; q < npol; ++q) est.taps[p][q].noalias() += grad * ext[q].segment(start, ntaps).conjugate();
      }
    }
    std::fill(theta.begin(), theta.end(), 0.0);
  }

  for (Eigen::Index n = 0; n < nsym; ++n) {
    const bool training = cfg.is_training(n);
    const bool preconverging = n < cfg.preconvergence_symbols;
    const double mu = preconverging ? cfg.step_size : cfg.tracking_step_size;
    const Eigen::Index start = pad + 2 * n + 1 - half;

    for (int p = 0; p < npol; ++p) {
      std::complex<double> y = 0.0;
      for (int q = 0; q < npol; ++q) {
        y += est.taps[p][q].cwiseProduct(ext[q].segment(start, ntaps)).sum();
      }
      const std::complex<double> derot = std::polar(1.0, -theta[p]);
      const std::complex<double> z = y * derot;
      est.symbols[p][n] = z;
      est.pll_phase[p][n] = theta[p];

      std::complex<double> d;
      if (training) {
        d = reference[p][n];
      } else if (cfg.mode == EqualizerMode::DecisionDirected) {
        d = decider.decide(p, n, z);
      } else {
        continue;
      }
      const std::complex<double> e = d - z;
      const double e2 = std::norm(e);
      if (preconverging && n >= pre_window_start) {
        pre_err += e2;
        ++pre_count;
      } else if (!preconverging) {
        trk_err += e2;
        ++trk_count;
      }

      theta[p] += pll_gain * std::imag(z * std::conj(d));
      const std::complex<double> grad = mu * e * std::conj(derot);
      for (int q = 0; q < npol; ++q) {
        est.taps[p][q].noalias() += grad * ext[q].segment(start, ntaps).conjugate();
      }
    }
  }

  est.preconvergence_mse = pre_count ? pre_err / static_cast<double>(pre_count) : 0.0;
  est.tracking_mse = trk_count ? trk_err / static_cast<double>(trk_count) : est.preconvergence_mse;
  est.converged = est.preconvergence_mse < cfg.convergence_mse;
  est.first_valid = half;
  est.valid_count = std::max<Eigen::Index>(0, nsym - ntaps);

  // residual frequency from the PLL phase slope over the tracked span
  const Eigen::Index a = std::min<Eigen::Index>(cfg.preconvergence_symbols, nsym);
  if (nsym - a > 2) {
    const Eigen::VectorXd& th = est.pll_phase[0];
    const double m = static_cast<double>(nsym - a);
    double st = 0.0, sp = 0.0, stt = 0.0, stp = 0.0;
    for (Eigen::Index i = a; i < nsym; ++i) {
      const double t = static_cast<double>(i - a);
      st += t;
      sp += th[i];
      stt += t * t;
      stp += t * th[i];
    }
    const double slope = (m * stp - st * sp) / (m * stt - st * st);
    est.residual_freq_hz = slope * w.symbol_rate / (2.0 * phys::kPi);
  }
  return est;
}

std::vector<Eigen::VectorXcd> symbol_rate_samples(const Waveform& w) {
  if (w.samples_per_symbol() != 2) throw std::invalid_argument("expected 2 samples/symbol");
  std::vector<Eigen::VectorXcd> out;
  const Eigen::Index nsym = w.symbols();
  for (const auto& x : w.pol) {
    Eigen::VectorXcd s(nsym);
    for (Eigen::Index n = 0; n < nsym; ++n) s[n] = x[2 * n + 1];
    out.push_back(std::move(s));
  }
  return out;
}

SyncResult synchronize(const std::vector<Eigen::VectorXcd>& received,
                       const std::vector<Eigen::VectorXcd>& preamble, double threshold) {
  const int npol = static_cast<int>(received.size());
  if (npol < 1 || npol > 2 || static_cast<int>(preamble.size()) != npol) {
    throw std::invalid_argument("synchronize: 1 or 2 polarizations with matching preambles");
  }
  const Eigen::Index n = received.front().size();
  const Eigen::Index plen = preamble.front().size();
  if (plen == 0 || plen > n) throw SyncError("preamble missing or longer than the frame");

  constexpr Eigen::Index kBlock = 256;
  const Eigen::Index nblocks = (plen + kBlock - 1) / kBlock;

  std::vector<Eigen::VectorXcd> rx_spec(npol);
  std::vector<double> rx_rms(npol);
  for (int a = 0; a < npol; ++a) {
    rx_spec[a] = fft(received[a]);
    rx_rms[a] = std::sqrt(received[a].squaredNorm() / static_cast<double>(n));
  }

  // corr[a][b](tau): rx a against preamble b
  std::vector<std::vector<Eigen::VectorXd>> corr(npol, std::vector<Eigen::VectorXd>(npol));
  std::vector<double> norm(npol, 0.0);
  for (int b = 0; b < npol; ++b) {
    for (int a = 0; a < npol; ++a) corr[a][b] = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < nblocks; ++j) {
      const Eigen::Index s = j * kBlock;
      const Eigen::Index len = std::min(kBlock, plen - s);
      Eigen::VectorXcd r = Eigen::VectorXcd::Zero(n);
      r.segment(s, len) = preamble[b].segment(s, len);
      const Eigen::VectorXcd r_spec = fft(r).conjugate();
      const double block_norm = preamble[b].segment(s, len).norm() * std::sqrt(static_cast<double>(len));
      norm[b] += block_norm;
      for (int a = 0; a < npol; ++a) {
        corr[a][b] += ifft(rx_spec[a].cwiseProduct(r_spec)).cwiseAbs() / rx_rms[a];
      }
    }
  }

  SyncResult best;
  best.peak_metric = -1.0;
  for (int hyp = 0; hyp < (npol == 2 ? 2 : 1); ++hyp) {
    for (Eigen::Index tau = 0; tau < n; ++tau) {
      double score = 0.0;
      double denom = 0.0;
      for (int b = 0; b < npol; ++b) {
        const int a = hyp == 0 ? b : 1 - b;
        score += corr[a][b][tau];
        denom += norm[b];
      }
      const double metric = score / denom;
      if (metric > best.peak_metric) {
        best.peak_metric = metric;
        best.offset = tau;
        best.swapped = hyp == 1;
      }
    }
  }
  if (best.peak_metric < threshold) {
    throw SyncError("frame sync failed: correlation peak " + std::to_string(best.peak_metric) +
                    " below threshold " + std::to_string(threshold));
  }
  return best;
}

Waveform apply_sync(const Waveform& w, const SyncResult& sync) {
  Waveform out = w;
  const Eigen::Index shift = -sync.offset * w.samples_per_symbol();
  for (auto& x : out.pol) x = circular_delay(x, shift);
  if (sync.swapped && out.pol_count() == 2) std::swap(out.pol[0], out.pol[1]);
  return out;
}

void write_taps(const SymbolEstimates& est, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open taps file for writing: " + path.string());
  os << "out_pol,in_pol,tap,re,im\n";
  char buf[128];
  for (std::size_t p = 0; p < est.taps.size(); ++p) {
    for (std::size_t q = 0; q < est.taps[p].size(); ++q) {
      const auto& h = est.taps[p][q];
      for (Eigen::Index k = 0; k < h.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%ld,%.12e,%.12e\n", p, q, static_cast<long>(k),
                      h[k].real(), h[k].imag());
        os << buf;
      }
    }
  }
}

}  // namespace y00
